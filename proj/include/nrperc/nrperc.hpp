#ifndef NRPERC_NRPERC_HPP
#define NRPERC_NRPERC_HPP

#include "nrperc/components.hpp"
#include "nrperc/errors.hpp"
#include "nrperc/experiments/config.hpp"
#include "nrperc/experiments/result.hpp"
#include "nrperc/experiments/runner.hpp"
#include "nrperc/experiments/suites.hpp"
#include "nrperc/exploration.hpp"
#include "nrperc/graph.hpp"
#include "nrperc/graphgen.hpp"
#include "nrperc/params.hpp"
#include "nrperc/rng.hpp"
#include "nrperc/special.hpp"
#include "nrperc/theory.hpp"
#include "nrperc/union_find.hpp"

#endif  // NRPERC_NRPERC_HPP
