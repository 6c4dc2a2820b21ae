// cost.hpp
// Concentration measures, variance and sample-cost predictors, the optimal
// importance sampler, and the auxiliary-state robustness machinery.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "evaqs/state_vector.hpp"

namespace evaqs {

/// Collision probability of the induced distribution: sum_x |tau_x|^4.
inline double collision_probability(const StateVector& tau) {
    double s = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double p = std::norm(tau[x]);
        s += p * p;
    }
    return s;
}

/// Renyi 2-entropy in bits: -log2 of the collision probability.
inline double renyi2_bits(const StateVector& tau) {
    return -std::log2(collision_probability(tau));
}

struct ChiSquare {
    double value = 0.0;
    bool support_violation = false;  // q_x = 0 somewhere p_x > 0; value is +inf
};

/// chi^2(p, q) = sum_x (p_x - q_x)^2 / q_x. A support violation means some
/// component of p cannot be sampled under q: the divergence (and any cost
/// built on it) is infinite, reported as a flagged +inf rather than an error.
inline ChiSquare chi_square(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("distribution sizes must match");
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        const double diff = p[x] - q[x];
        if (q[x] <= 0.0) {
            if (p[x] > 0.0) return {std::numeric_limits<double>::infinity(), true};
            continue;
        }
        s += diff * diff / q[x];
    }
    return {s, false};
}

inline std::vector<double> uniform_distribution(std::uint64_t d) {
    return std::vector<double>(d, 1.0 / static_cast<double>(d));
}

struct ConcentrationReport {
    double p_coll = 0.0;
    double effective_support = 0.0;  // 1 / p_coll
    double renyi2 = 0.0;             // bits
    double d_p_coll = 0.0;           // = 2^{n - H2}
};

inline ConcentrationReport concentration_report(const StateVector& tau) {
    ConcentrationReport r;
    r.p_coll = collision_probability(tau);
    r.effective_support = 1.0 / r.p_coll;
    r.renyi2 = -std::log2(r.p_coll);
    r.d_p_coll = static_cast<double>(tau.dim()) * r.p_coll;
    return r;
}

// --- error decomposition ---

/// mu = e^{i phase}(tau cos(theta) + sigma sin(theta)) with sigma a unit
/// vector orthogonal to tau; epsilon = e^{-i phase} mu - tau is the error
/// after correcting the global phase. At F = 0 the phase is undefined and is
/// reported as such (phase 0 is then used to form epsilon); at F = 1 sigma is
/// an arbitrary deterministic unit vector orthogonal to tau.
struct ErrorDecomposition {
    double fidelity = 0.0;
    double infidelity = 0.0;
    double theta = 0.0;
    double phase = 0.0;
    bool phase_defined = true;
    std::vector<cdouble> epsilon;
    StateVector sigma;
};

inline ErrorDecomposition decompose_error(const StateVector& mu, const StateVector& tau) {
    const cdouble overlap = inner_product(tau, mu);  // sqrt(F) e^{i phase}
    ErrorDecomposition dec{.sigma = StateVector(tau.n_qubits())};
    dec.fidelity = std::norm(overlap);
    dec.infidelity = 1.0 - dec.fidelity;
    const double cos_theta = std::sqrt(std::min(dec.fidelity, 1.0));
    dec.theta = std::acos(cos_theta);
    dec.phase_defined = dec.fidelity > 0.0;
    dec.phase = dec.phase_defined ? std::arg(overlap) : 0.0;

    const cdouble unphase = std::polar(1.0, -dec.phase);
    const std::uint64_t d = tau.dim();
    dec.epsilon.resize(d);
    for (std::uint64_t x = 0; x < d; ++x) dec.epsilon[x] = unphase * mu[x] - tau[x];

    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - dec.fidelity));
    if (sin_theta > 1e-14) {
        const double inv = 1.0 / sin_theta;
        for (std::uint64_t x = 0; x < d; ++x)
            dec.sigma[x] = (unphase * mu[x] - cos_theta * tau[x]) * inv;
    } else {
        // mu == tau up to phase: any unit vector orthogonal to tau works;
        // take the basis state where tau is smallest, orthogonalized
        std::uint64_t k = 0;
        for (std::uint64_t x = 1; x < d; ++x)
            if (std::norm(tau[x]) < std::norm(tau[k])) k = x;
        for (std::uint64_t x = 0; x < d; ++x) dec.sigma[x] = -std::conj(tau[k]) * tau[x];
        dec.sigma[k] += 1.0;
        dec.sigma.normalize();
    }
    return dec;
}

// --- variance predictors ---

/// Delta-method variance of the ratio estimator at sample size N:
/// Var F~ = (1/N) sum_x (|tau_x|^2 / |alpha_x|^2) Q_x with
/// Q_x = (1+F^2)(|mu_x|^2 + |tau_x|^2) - 4F Re(conj(tau_x) mu_x <mu|tau>).
inline double variance_exact(const StateVector& mu, const StateVector& tau,
                             std::span<const double> alpha_probs, double n_samples) {
    if (alpha_probs.size() != tau.dim())
        throw std::invalid_argument("auxiliary distribution size must match");
    const cdouble mu_tau = inner_product(mu, tau);  // <mu|tau>
    const double f = std::norm(mu_tau);
    double s = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double t2 = std::norm(tau[x]);
        if (t2 == 0.0) continue;
        if (alpha_probs[x] <= 0.0)
            throw std::domain_error("auxiliary state lacks support on the target");
        const double q = (1.0 + f * f) * (std::norm(mu[x]) + t2) -
                         4.0 * f * (std::conj(tau[x]) * mu[x] * mu_tau).real();
        s += t2 / alpha_probs[x] * q;
    }
    return s / n_samples;
}

/// Small-infidelity variance, sigma form:
/// (2 I / N) sum_x |tau_x|^2 (|tau_x|^2 + |sigma_x|^2) / |alpha_x|^2.
inline double variance_small_infidelity(const StateVector& tau, const StateVector& sigma,
                                        double infid, std::span<const double> alpha_probs,
                                        double n_samples) {
    if (alpha_probs.size() != tau.dim())
        throw std::invalid_argument("auxiliary distribution size must match");
    double s = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double t2 = std::norm(tau[x]);
        const double num = t2 * (t2 + std::norm(sigma[x]));
        if (num == 0.0) continue;
        if (alpha_probs[x] <= 0.0)
            throw std::domain_error("auxiliary state lacks support on the target");
        s += num / alpha_probs[x];
    }
    return 2.0 * infid * s / n_samples;
}

/// Small-infidelity variance, epsilon form:
/// (2 / N) sum_x (I |tau_x|^4 + |tau_x|^2 |eps_x|^2) / |alpha_x|^2.
inline double variance_small_infidelity_from_error(const StateVector& tau,
                                                   std::span<const cdouble> epsilon,
                                                   double infid,
                                                   std::span<const double> alpha_probs,
                                                   double n_samples) {
    if (alpha_probs.size() != tau.dim() || epsilon.size() != tau.dim())
        throw std::invalid_argument("vector sizes must match");
    double s = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double t2 = std::norm(tau[x]);
        const double num = t2 * (infid * t2 + std::norm(epsilon[x]));
        if (num == 0.0) continue;
        if (alpha_probs[x] <= 0.0)
            throw std::domain_error("auxiliary state lacks support on the target");
        s += num / alpha_probs[x];
    }
    return 2.0 * s / n_samples;
}

// --- sample-cost heuristics (real-valued; callers round up) ---

/// N ~ 4 I eps^-2 (1 + chi^2(|tau|^2, |alpha|^2)).
inline double cost_chi2(double infid, double precision, std::span<const double> tau_probs,
                        std::span<const double> alpha_probs) {
    if (!(infid > 0.0 && infid < 1.0) || precision <= 0.0)
        throw std::invalid_argument("need 0 < I < 1 and precision > 0");
    const auto chi2 = chi_square(tau_probs, alpha_probs);
    return 4.0 * infid / (precision * precision) * (1.0 + chi2.value);
}

/// N ~ 4 I eps^-2 d p_coll; the uniform-sampler special case.
inline double cost_uniform(double infid, double precision, const StateVector& tau) {
    if (!(infid > 0.0 && infid < 1.0) || precision <= 0.0)
        throw std::invalid_argument("need 0 < I < 1 and precision > 0");
    return 4.0 * infid / (precision * precision) * static_cast<double>(tau.dim()) *
           collision_probability(tau);
}

/// Variance-optimal sampling distribution:
/// |alpha_x|^2 proportional to sqrt(|tau_x|^2 (|tau_x|^2 + |sigma_x|^2)).
inline std::vector<double> optimal_alpha(const StateVector& tau, const StateVector& sigma) {
    if (tau.n_qubits() != sigma.n_qubits())
        throw std::invalid_argument("register sizes must match");
    std::vector<double> probs(tau.dim());
    double total = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double t2 = std::norm(tau[x]);
        probs[x] = std::sqrt(t2 * (t2 + std::norm(sigma[x])));
        total += probs[x];
    }
    if (total <= 0.0) throw std::invalid_argument("degenerate all-zero input");
    for (double& p : probs) p /= total;
    return probs;
}

// --- auxiliary-state robustness ---

/// The target the procedure effectively estimates against when alpha is
/// mischaracterized as alpha_tilde: tau~_x proportional to tau_x alpha_x / alpha~_x.
inline StateVector perturbed_target(const StateVector& tau, const StateVector& alpha,
                                    const StateVector& alpha_tilde) {
    if (tau.n_qubits() != alpha.n_qubits() || tau.n_qubits() != alpha_tilde.n_qubits())
        throw std::invalid_argument("register sizes must match");
    StateVector result(tau.n_qubits());
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        if (tau[x] == cdouble{0.0, 0.0}) {
            result[x] = 0.0;
            continue;
        }
        if (alpha_tilde[x] == cdouble{0.0, 0.0})
            throw std::domain_error("alpha~ vanishes on the support of tau");
        result[x] = tau[x] * alpha[x] / alpha_tilde[x];
    }
    result.normalize();
    return result;
}

/// RMS relative characterization error:
/// delta_rms^2 = sum_x |tau_x|^2 |alpha_x/alpha~_x - 1|^2.
inline double delta_rms(const StateVector& tau, const StateVector& alpha,
                        const StateVector& alpha_tilde) {
    if (tau.n_qubits() != alpha.n_qubits() || tau.n_qubits() != alpha_tilde.n_qubits())
        throw std::invalid_argument("register sizes must match");
    double s = 0.0;
    for (std::uint64_t x = 0; x < tau.dim(); ++x) {
        const double t2 = std::norm(tau[x]);
        if (t2 == 0.0) continue;
        if (alpha_tilde[x] == cdouble{0.0, 0.0})
            throw std::domain_error("alpha~ vanishes on the support of tau");
        s += t2 * std::norm(alpha[x] / alpha_tilde[x] - 1.0);
    }
    return std::sqrt(s);
}

/// Worst-case drop of the true fidelity below the estimated one:
/// F(mu,tau) >= F(mu,tau~) - 2 delta/(1-delta). Vacuous (+inf) at delta >= 1.
inline double robustness_bound(double delta) {
    if (delta < 0.0) throw std::invalid_argument("delta_rms must be nonnegative");
    if (delta >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * delta / (1.0 - delta);
}

struct RobustnessReport {
    StateVector perturbed;  // tau~
    double delta = 0.0;     // delta_rms
    double bound = 0.0;     // 2 delta / (1 - delta); +inf when vacuous
    bool vacuous = false;
};

inline RobustnessReport robustness_report(const StateVector& tau, const StateVector& alpha,
                                          const StateVector& alpha_tilde) {
    RobustnessReport report{perturbed_target(tau, alpha, alpha_tilde),
                            delta_rms(tau, alpha, alpha_tilde)};
    report.bound = robustness_bound(report.delta);
    report.vacuous = !(report.delta < 1.0);
    return report;
}

}  // namespace evaqs
