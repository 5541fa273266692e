#ifndef NRPERC_PARAMS_HPP
#define NRPERC_PARAMS_HPP

// Deterministic model parameters: the power-law weight sequence and the
// barely supercritical percolation schedules built on top of it.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nrperc/errors.hpp"

namespace nrperc {

/// Exponent-derived constants of a power-law weight distribution with
/// tail [1-F](w) = C w^{-(tau-1)}.
struct ModelConstants {
    double alpha = 0;  // 1/(tau-1)
    double eta = 0;    // (3-tau)/(tau-1), multi-edge critical exponent
    double eta_s = 0;  // (3-tau)/2, single-edge critical exponent
    double c_F = 0;    // C^{1/(tau-1)}
    double mu = 0;     // limiting mean weight, c_F (tau-1)/(tau-2)
};

inline ModelConstants derive_constants(double tau, double C) {
    if (!(tau > 2.0 && tau < 3.0)) {
        std::ostringstream os;
        os << "tau must lie in (2,3), got tau=" << tau;
        throw DomainError(os.str());
    }
    if (!(C > 0.0) || !std::isfinite(C)) {
        std::ostringstream os;
        os << "C must be a positive finite real, got C=" << C;
        throw DomainError(os.str());
    }
    ModelConstants k;
    k.alpha = 1.0 / (tau - 1.0);
    k.eta = (3.0 - tau) / (tau - 1.0);
    k.eta_s = (3.0 - tau) / 2.0;
    // Inverting [1-F](w) = C w^{-(tau-1)} at level i/n gives c_F = C^{+1/(tau-1)}.
    k.c_F = std::pow(C, k.alpha);
    k.mu = k.c_F * (tau - 1.0) / (tau - 2.0);
    return k;
}

struct ModelParams {
    double tau = 2.5;
    double C = 1.0;
    std::int64_t n = 1;
    double alpha = 0;
    double eta = 0;
    double eta_s = 0;
    double c_F = 0;
    double mu = 0;

    static ModelParams make(double tau, double C, std::int64_t n) {
        if (n < 1) {
            throw DomainError("vertex count n must be >= 1, got n=" + std::to_string(n));
        }
        const ModelConstants k = derive_constants(tau, C);
        ModelParams p;
        p.tau = tau;
        p.C = C;
        p.n = n;
        p.alpha = k.alpha;
        p.eta = k.eta;
        p.eta_s = k.eta_s;
        p.c_F = k.c_F;
        p.mu = k.mu;
        return p;
    }

    /// Same exponents and constants on a different vertex count.
    ModelParams with_n(std::int64_t new_n) const { return make(tau, C, new_n); }
};

/// w_1 >= w_2 >= ... >= w_n with w_i = c_F (n/i)^alpha. Index 0 holds w_1.
struct WeightSequence {
    ModelParams params;
    std::vector<double> weights;
    double ell_n = 0;

    std::size_t size() const { return weights.size(); }
    double operator[](std::size_t i) const { return weights[i]; }
};

inline WeightSequence build_weights(const ModelParams& params) {
    if (params.n < 1) {
        throw DomainError("build_weights: n must be >= 1");
    }
    WeightSequence ws;
    ws.params = params;
    const auto n = static_cast<std::size_t>(params.n);
    ws.weights.resize(n);
    const double nd = static_cast<double>(params.n);
    long double total = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = params.c_F * std::pow(nd / static_cast<double>(i + 1), params.alpha);
        ws.weights[i] = w;
        total += w;
    }
    ws.ell_n = static_cast<double>(total);
    return ws;
}

/// Builds a weight sequence from explicit weights (toy graphs, restricted vertex sets).
/// Weights must be positive; ordering is not required.
inline WeightSequence weights_from_values(std::vector<double> values, ModelParams params = {}) {
    if (values.empty()) {
        throw DomainError("weights_from_values: empty weight vector");
    }
    long double total = 0.0L;
    for (double w : values) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("weights_from_values: weights must be positive and finite");
        }
        total += w;
    }
    WeightSequence ws;
    ws.params = params;
    ws.params.n = static_cast<std::int64_t>(values.size());
    ws.weights = std::move(values);
    ws.ell_n = static_cast<double>(total);
    return ws;
}

enum class PercolationMode { multi, single };

inline std::string to_string(PercolationMode m) {
    return m == PercolationMode::multi ? "multi" : "single";
}

inline PercolationMode parse_mode(const std::string& s) {
    if (s == "multi") return PercolationMode::multi;
    if (s == "single") return PercolationMode::single;
    throw DomainError("unknown percolation mode '" + s + "' (expected multi|single)");
}

/// Closed set of rules producing lambda_n from n.
struct LambdaRule {
    enum class Kind { constant, power, log_power };

    Kind kind = Kind::power;
    double value = 0.1;  // the constant c, or the exponent gamma

    static LambdaRule constant(double c) { return {Kind::constant, c}; }
    static LambdaRule power(double gamma) { return {Kind::power, gamma}; }
    static LambdaRule log_power(double gamma) { return {Kind::log_power, gamma}; }

    double evaluate(std::int64_t n) const {
        const double nd = static_cast<double>(n);
        switch (kind) {
            case Kind::constant:
                return value;
            case Kind::power:
                return std::pow(nd, value);
            case Kind::log_power:
                return std::pow(std::log(nd), value);
        }
        return value;
    }

    std::string kind_name() const {
        switch (kind) {
            case Kind::constant:
                return "constant";
            case Kind::power:
                return "power";
            case Kind::log_power:
                return "log_power";
        }
        return "constant";
    }

    static LambdaRule parse(const std::string& kind_name, double value) {
        if (kind_name == "constant") {
            if (!(value > 0)) throw DomainError("constant lambda rule needs c > 0");
            return constant(value);
        }
        if (kind_name == "power") {
            if (!(value > 0)) throw DomainError("power lambda rule needs gamma > 0");
            return power(value);
        }
        if (kind_name == "log_power") {
            if (!(value > 0)) throw DomainError("log_power lambda rule needs gamma > 0");
            return log_power(value);
        }
        throw DomainError("unknown lambda rule '" + kind_name +
                          "' (expected constant|power|log_power)");
    }
};

struct PercolationSchedule {
    PercolationMode mode = PercolationMode::multi;
    LambdaRule lambda_rule;
    double tau = 2.5;
    std::int64_t n = 1;
    double lambda_n = 1;
    double pi_n = 0;
    double beta_n = 0;
    std::optional<double> N_n;  // single mode only

    /// pi_n * w_i
    double percolated_weight(double w) const { return pi_n * w; }
    double percolated_total(const WeightSequence& ws) const { return pi_n * ws.ell_n; }

    /// The core scale recomputed from pi_n: N_n = n pi_n^{(tau-1)/(3-tau)}.
    double N_n_from_pi() const {
        return static_cast<double>(n) * std::pow(pi_n, (tau - 1.0) / (3.0 - tau));
    }
};

inline PercolationSchedule make_schedule(const ModelParams& params, PercolationMode mode,
                                         const LambdaRule& rule) {
    PercolationSchedule s;
    s.mode = mode;
    s.lambda_rule = rule;
    s.tau = params.tau;
    s.n = params.n;
    s.lambda_n = rule.evaluate(params.n);
    const double nd = static_cast<double>(params.n);
    const double exponent = (mode == PercolationMode::multi) ? params.eta : params.eta_s;
    s.pi_n = s.lambda_n * std::pow(nd, -exponent);

    if (!(s.lambda_n >= 1.0) || !(s.pi_n > 0.0 && s.pi_n < 1.0)) {
        std::ostringstream os;
        os << "infeasible percolation schedule: n=" << params.n << " lambda_n=" << s.lambda_n
           << " mode=" << to_string(mode) << " gives pi_n=" << s.pi_n
           << " (need lambda_n >= 1 and pi_n in (0,1))";
        throw ScheduleInfeasible(os.str(), nd, s.lambda_n, to_string(mode));
    }
    s.beta_n = nd * std::pow(s.pi_n, 1.0 / (3.0 - params.tau));
    if (mode == PercolationMode::single) {
        s.N_n = std::pow(s.lambda_n, (params.tau - 1.0) / (3.0 - params.tau)) *
                std::pow(nd, (3.0 - params.tau) / 2.0);
    }
    return s;
}

/// floor(a * N_n), checked against [1, n].
inline std::int64_t core_prefix_size(double N_n, std::int64_t n, double a) {
    if (!(a > 0.0)) {
        throw DomainError("core_prefix_size: a must be positive");
    }
    const double raw = std::floor(a * N_n);
    if (raw < 1.0) {
        std::ostringstream os;
        os << "core is empty: floor(a*N_n) = floor(" << a << "*" << N_n << ") < 1";
        throw CoreEmpty(os.str());
    }
    if (raw > static_cast<double>(n)) {
        std::ostringstream os;
        os << "core exceeds graph: floor(a*N_n) = " << raw << " > n = " << n;
        throw CoreExceedsGraph(os.str());
    }
    return static_cast<std::int64_t>(raw);
}

inline std::int64_t core_prefix_size(const PercolationSchedule& s, double a) {
    if (s.mode != PercolationMode::single || !s.N_n) {
        throw DomainError("core_prefix_size requires a single-mode schedule");
    }
    return core_prefix_size(*s.N_n, s.n, a);
}

}  // namespace nrperc

#endif  // NRPERC_PARAMS_HPP
