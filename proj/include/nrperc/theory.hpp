#ifndef NRPERC_THEORY_HPP
#define NRPERC_THEORY_HPP

// Closed-form limits, the core branching-process fixed point, and a Monte
// Carlo branching-process estimator used as an independent oracle for it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "nrperc/errors.hpp"
#include "nrperc/params.hpp"
#include "nrperc/rng.hpp"
#include "nrperc/special.hpp"

namespace nrperc {

struct TheoryConstants {
    double kappa = 0;         // c_F^{tau-2} Gamma(3-tau)
    double zeta = 0;          // mu kappa^{1/(3-tau)}, the limiting giant size over beta_n
    double rho_star_inf = 0;  // Gamma(3-tau)^{1/(3-tau)} cbar_F^{(tau-2)/(3-tau)}
    double c_F_bar = 0;       // c_F^2 / (mu (1-alpha)), equal to c_F
};

/// zeta through the core chain c_F rho*_inf / (1-alpha), written out in
/// terms of Gamma, c_F and cbar_F. Kept separate from compute_constants so
/// the two evaluations can be compared.
inline double zeta_via_core_chain(const ModelParams& p) {
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    const double g = gamma_function(3.0 - p.tau);
    return std::pow(g, 1.0 / (3.0 - p.tau)) * p.c_F *
           std::pow(c_bar, (p.tau - 2.0) / (3.0 - p.tau)) * (p.tau - 1.0) / (p.tau - 2.0);
}

inline TheoryConstants compute_constants(const ModelParams& p) {
    TheoryConstants k;
    const double g = gamma_function(3.0 - p.tau);
    k.kappa = std::pow(p.c_F, p.tau - 2.0) * g;
    k.zeta = p.mu * std::pow(k.kappa, 1.0 / (3.0 - p.tau));
    k.c_F_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    k.rho_star_inf = std::pow(g, 1.0 / (3.0 - p.tau)) *
                     std::pow(k.c_F_bar, (p.tau - 2.0) / (3.0 - p.tau));
    return k;
}

/// z(t) = mu^{3-tau} kappa t^{tau-2} - t, with z(0) = 0.
inline double limit_curve_z(double t, const ModelParams& p, const TheoryConstants& k) {
    if (!(t >= 0.0)) {
        throw DomainError("limit_curve_z: t must be nonnegative");
    }
    if (t == 0.0) return 0.0;
    return std::pow(p.mu, 3.0 - p.tau) * k.kappa * std::pow(t, p.tau - 2.0) - t;
}

/// Location and height of the maximum of z on [0, zeta].
inline double limit_curve_argmax(const ModelParams& p, const TheoryConstants& k) {
    // z'(t) = 0  <=>  (tau-2) mu^{3-tau} kappa t^{tau-3} = 1
    return std::pow((p.tau - 2.0) * std::pow(p.mu, 3.0 - p.tau) * k.kappa, 1.0 / (3.0 - p.tau));
}

inline double limit_curve_max(const ModelParams& p, const TheoryConstants& k) {
    return limit_curve_z(limit_curve_argmax(p, k), p, k);
}

/// sum_i (w_i/l_n) (1 - (1 - w_i/l_n)^{t beta_n}), evaluated exactly in O(n).
inline double laplace_sum_exact(const WeightSequence& ws, double t, double beta_n) {
    const double exponent = t * beta_n;
    if (!(exponent >= 0.0)) {
        throw DomainError("laplace_sum_exact: t*beta_n must be nonnegative");
    }
    long double total = 0.0L;
    for (double w : ws.weights) {
        const double x = w / ws.ell_n;
        const double hit = (x >= 1.0) ? (exponent > 0 ? 1.0 : 0.0)
                                      : -std::expm1(exponent * std::log1p(-x));
        total += x * hit;
    }
    return static_cast<double>(total);
}

/// kappa (t_n/mu)^{tau-2} with t_n = t pi_n^{1/(3-tau)}: the large-n form of laplace_sum_exact.
inline double laplace_sum_asymptote(const ModelParams& p, const TheoryConstants& k, double t,
                                    double pi_n) {
    const double t_n = t * std::pow(pi_n, 1.0 / (3.0 - p.tau));
    return k.kappa * std::pow(t_n / p.mu, p.tau - 2.0);
}

namespace detail {

// Integrals of the form int_0^1 s^{-alpha} h(s) ds are mapped through
// s = y^{1/(1-alpha)}, which turns them into (1/(1-alpha)) int_0^1 h(y^{1/(1-alpha)}) dy.
inline double survival_integrand(double y, double alpha, double rate) {
    // 1 - exp(-rate * s^{-alpha}) at s = y^{1/(1-alpha)}, i.e. s^{-alpha} = y^{-alpha/(1-alpha)}
    if (rate <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double s_pow = std::pow(y, -alpha / (1.0 - alpha));
    return -std::expm1(-rate * s_pow);
}

inline QuadratureOptions fixed_point_quadrature(double tol) {
    QuadratureOptions q;
    q.abs_tol = std::min(1e-10, tol * 1e-2);
    q.abs_tol = std::max(q.abs_tol, 1e-15);
    return q;
}

}  // namespace detail

/// Right-hand side of the child-survival equation:
/// Phi(rho) = int_0^a (u^{-alpha} / int_0^a v^{-alpha} dv) [1 - e^{-cbar a^{1-alpha} u^{-alpha} rho}] du.
inline double rho_star_map(double rho, double a, const ModelParams& p,
                           QuadratureOptions q = {}) {
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    // After u = a s the exponent is cbar a^{1-2 alpha} s^{-alpha} rho, and the
    // normalized measure (1-alpha) s^{-alpha} ds becomes dy.
    const double rate = c_bar * std::pow(a, 1.0 - 2.0 * p.alpha) * rho;
    return adaptive_simpson(
        [&](double y) { return detail::survival_integrand(y, p.alpha, rate); }, 0.0, 1.0, q);
}

struct FixedPointResult {
    double value = 0;
    double residual = 0;
    int iterations = 0;
    std::vector<double> trajectory;  // iterates, starting at rho_0 = 1
};

inline FixedPointResult solve_rho_star(double a, const ModelParams& p, double tol = 1e-12,
                                       int max_iterations = 100000) {
    if (!(a > 0.0)) throw DomainError("rho_star_fixed_point: a must be positive");
    if (!(tol > 0.0)) throw DomainError("rho_star_fixed_point: tol must be positive");
    const QuadratureOptions q = detail::fixed_point_quadrature(tol);

    FixedPointResult r;
    double rho = 1.0;
    r.trajectory.push_back(rho);
    double delta = 1.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const double next = rho_star_map(rho, a, p, q);
        delta = std::abs(next - rho);
        rho = next;
        r.trajectory.push_back(rho);
        r.iterations = it;
        if (delta < tol) {
            r.value = rho;
            r.residual = std::abs(rho_star_map(rho, a, p, q) - rho);
            return r;
        }
    }
    std::ostringstream os;
    os << "rho_star_fixed_point: no convergence after " << max_iterations
       << " iterations (a=" << a << ", last step " << delta << ")";
    throw NumericalFailure(os.str(), delta);
}

/// Largest fixed point rho*_a, found by iterating from 1.
inline double rho_star_fixed_point(double a, const ModelParams& p, double tol = 1e-12) {
    return solve_rho_star(a, p, tol).value;
}

/// Survival probability of a type-u particle in the core branching process.
inline double rho_a_of_u(double u, double a, double rho_star_a, const ModelParams& p) {
    if (!(u > 0.0)) throw DomainError("rho_a_of_u: u must be positive");
    if (u > a * (1.0 + 1e-12)) throw DomainError("rho_a_of_u: u must not exceed a");
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    return -std::expm1(-c_bar * std::pow(a, 1.0 - p.alpha) * std::pow(u, -p.alpha) * rho_star_a);
}

/// rho_a = (1/a) int_0^a rho_a(u) du, the limiting giant fraction of the core.
inline double rho_a_mean(double a, double rho_star_a, const ModelParams& p,
                         QuadratureOptions q = {}) {
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    const double rate = c_bar * std::pow(a, 1.0 - 2.0 * p.alpha) * rho_star_a;
    const double inv = 1.0 / (1.0 - p.alpha);
    // int_0^1 (1 - e^{-rate s^{-alpha}}) ds with s = y^{1/(1-alpha)}, ds = inv y^{alpha inv} dy
    return adaptive_simpson(
        [&](double y) {
            if (y <= 0.0) return 0.0;
            return detail::survival_integrand(y, p.alpha, rate) * inv *
                   std::pow(y, p.alpha * inv);
        },
        0.0, 1.0, q);
}

struct CoreLimit {
    double a = 0;
    double rho_star_a = 0;
    double zeta_a = 0;
    double rho_a_mean = 0;
};

/// zeta_a = int_0^a c_F u^{-alpha} rho_a(u) du, computed by quadrature around
/// the fixed point rho*_a.
inline double zeta_a_from_rho_star(double a, double rho_star_a, const ModelParams& p,
                                   QuadratureOptions q = {}) {
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    const double rate = c_bar * std::pow(a, 1.0 - 2.0 * p.alpha) * rho_star_a;
    const double integral = adaptive_simpson(
        [&](double y) { return detail::survival_integrand(y, p.alpha, rate); }, 0.0, 1.0, q);
    return p.c_F * std::pow(a, 1.0 - p.alpha) / (1.0 - p.alpha) * integral;
}

inline CoreLimit core_limit(double a, const ModelParams& p, double tol = 1e-12) {
    CoreLimit c;
    c.a = a;
    c.rho_star_a = rho_star_fixed_point(a, p, tol);
    const QuadratureOptions q = detail::fixed_point_quadrature(tol);
    c.zeta_a = zeta_a_from_rho_star(a, c.rho_star_a, p, q);
    c.rho_a_mean = rho_a_mean(a, c.rho_star_a, p, q);
    return c;
}

inline double zeta_a(double a, const ModelParams& p) { return core_limit(a, p).zeta_a; }

/// Largest eigenvalue of the kernel operator truncated to (eps, a]:
/// (c_F^2/mu) int_eps^a v^{-2 alpha} dv.
inline double truncated_operator_norm(double eps, double a, const ModelParams& p) {
    if (!(eps > 0.0) || !(eps < a)) {
        throw DomainError("truncated_operator_norm: need 0 < eps < a");
    }
    const double e = 1.0 - 2.0 * p.alpha;  // negative
    return p.c_F * p.c_F / p.mu * (std::pow(eps, e) - std::pow(a, e)) / (2.0 * p.alpha - 1.0);
}

/// Large-n upper bound on the expected forward degree after exploring t beta_n marks:
/// (1/alpha) mu^{1-1/alpha} c_F^{1/alpha} Gamma(3-tau) t^{-(3-tau)}.
inline double forward_degree_asymptote(double t, const ModelParams& p) {
    if (!(t > 0.0)) throw DomainError("forward_degree_asymptote: t must be positive");
    return (1.0 / p.alpha) * std::pow(p.mu, 1.0 - 1.0 / p.alpha) * std::pow(p.c_F, 1.0 / p.alpha) *
           gamma_function(3.0 - p.tau) * std::pow(t, -(3.0 - p.tau));
}

/// Smallest t at which forward_degree_asymptote drops to `level`.
inline double forward_degree_horizon(double level, const ModelParams& p) {
    const double at_one = forward_degree_asymptote(1.0, p);
    return std::pow(at_one / level, 1.0 / (3.0 - p.tau));
}

// --- Monte Carlo branching process --------------------------------------

/// Mean number of children of a type-u particle: cbar_F a^{1-alpha} u^{-alpha}.
inline double offspring_mean(double u, double a, const ModelParams& p) {
    const double c_bar = p.c_F * p.c_F / (p.mu * (1.0 - p.alpha));
    return c_bar * std::pow(a, 1.0 - p.alpha) * std::pow(u, -p.alpha);
}

/// Child type drawn with density proportional to x^{-alpha} on (0, a].
inline double sample_child_type(double a, const ModelParams& p, Rng& rng) {
    double U = uniform01(rng);
    while (U <= 0.0) U = uniform01(rng);
    return a * std::pow(U, 1.0 / (1.0 - p.alpha));
}

struct SurvivalEstimate {
    double p = 0;
    double std_error = 0;
    std::int64_t replicas = 0;
    std::int64_t survivors = 0;
};

struct BranchingOptions {
    int depth_cap = 50;
    std::int64_t replicas = 10000;
    /// A population this large is counted as surviving: from K fresh children
    /// extinction has probability (1 - rho*_a)^K.
    std::size_t population_cap = 1000;
};

/// Fraction of replicas of the type-u branching process still alive at depth_cap.
inline SurvivalEstimate branching_survival_mc(double u, double a, const ModelParams& p,
                                              BranchingOptions opt, Rng& rng) {
    if (!(u > 0.0) || u > a) throw DomainError("branching_survival_mc: need 0 < u <= a");
    if (opt.depth_cap < 1) throw DomainError("branching_survival_mc: depth_cap must be >= 1");
    if (opt.replicas < 1) throw DomainError("branching_survival_mc: replicas must be >= 1");

    std::vector<double> current;
    std::vector<double> next;
    std::int64_t alive = 0;
    for (std::int64_t r = 0; r < opt.replicas; ++r) {
        current.assign(1, u);
        bool survived = false;
        for (int depth = 0; depth < opt.depth_cap; ++depth) {
            next.clear();
            for (double v : current) {
                const std::uint64_t kids = poisson(rng, offspring_mean(v, a, p));
                if (next.size() + kids >= opt.population_cap) {
                    next.resize(opt.population_cap);
                    break;
                }
                for (std::uint64_t c = 0; c < kids; ++c) next.push_back(sample_child_type(a, p, rng));
            }
            if (next.empty()) break;
            if (next.size() >= opt.population_cap) {
                survived = true;
                break;
            }
            current.swap(next);
            if (depth + 1 == opt.depth_cap) survived = true;
        }
        if (survived) ++alive;
    }
    SurvivalEstimate e;
    e.replicas = opt.replicas;
    e.survivors = alive;
    e.p = static_cast<double>(alive) / static_cast<double>(opt.replicas);
    e.std_error = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(opt.replicas));
    return e;
}

}  // namespace nrperc

#endif  // NRPERC_THEORY_HPP
