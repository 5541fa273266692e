#ifndef NRPERC_ERRORS_HPP
#define NRPERC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nrperc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Index or time outside the range covered by the data.
class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

/// The percolation probability implied by (n, lambda_n, mode) is not in (0,1).
class ScheduleInfeasible : public std::runtime_error {
public:
    ScheduleInfeasible(const std::string& what, double n, double lambda, std::string mode)
        : std::runtime_error(what), n_(n), lambda_(lambda), mode_(std::move(mode)) {}

    double n() const { return n_; }
    double lambda() const { return lambda_; }
    const std::string& mode() const { return mode_; }

private:
    double n_;
    double lambda_;
    std::string mode_;
};

class CoreEmpty : public std::runtime_error {
public:
    explicit CoreEmpty(const std::string& what) : std::runtime_error(what) {}
};

class CoreExceedsGraph : public std::runtime_error {
public:
    explicit CoreExceedsGraph(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver or quadrature did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double last_residual)
        : std::runtime_error(what), residual_(last_residual) {}

    double last_residual() const { return residual_; }

private:
    double residual_;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a structural invariant check fails on generated data.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nrperc

#endif  // NRPERC_ERRORS_HPP
