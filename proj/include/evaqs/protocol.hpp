// protocol.hpp
// Shot-by-shot simulation of the snippet-comparison verification protocol and
// the ratio estimators built on its trial records.
//
// A trial produces (x, y, b, w'): two measured basis indices, a three-valued
// Bell outcome b in {-1, 0, +1}, and the sample weight
// w' = |tau'_x/alpha'_x|^2 + |tau'_y/alpha'_y|^2 computed from *oracle*
// (primed, unnormalized) amplitudes only. The simulator draws (x, y, b) from
// the exact outcome distribution using the normalized amplitudes it knows;
// the estimator path never sees them. Any common rescaling of the oracles
// cancels in the final ratio.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "evaqs/rng.hpp"
#include "evaqs/sampler.hpp"
#include "evaqs/state_vector.hpp"

namespace evaqs {

/// Basis index -> unnormalized amplitude. Values must be one fixed scalar
/// multiple of the true normalized amplitudes; the multiple is recorded so
/// tests can exercise the cancellation.
struct AmplitudeOracle {
    std::function<cdouble(std::uint64_t)> query;
    cdouble scale{1.0, 0.0};
};

inline AmplitudeOracle oracle_from_state(const StateVector& state, cdouble scale = 1.0) {
    auto amps = std::make_shared<std::vector<cdouble>>(state.amplitudes().begin(),
                                                       state.amplitudes().end());
    if (scale != cdouble{1.0, 0.0})
        for (auto& a : *amps) a *= scale;
    return {[amps](std::uint64_t x) { return (*amps)[x]; }, scale};
}

inline AmplitudeOracle uniform_amplitude_oracle(int n_qubits, cdouble scale = 1.0) {
    const double amp = std::pow(2.0, -0.5 * n_qubits);
    return {[value = scale * amp](std::uint64_t) { return value; }, scale};
}

struct TrialRecord {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    int b = 0;          // -1, 0, +1
    double weight = 0;  // w' from the oracles
};

namespace detail {

// Conditional Bell-outcome probabilities given measured (x, y): from the
// two-ancilla state the +/- outcomes carry |mu_x tau_y +- mu_y tau_x|^2 /
// (2 p2 w) with p2 = |mu_x alpha_y|^2 + |mu_y alpha_x|^2 and
// w = |tau_x/alpha_x|^2 + |tau_y/alpha_y|^2. When both tau snippets vanish
// the comparison state is unpreparable; that mass is reported as b = 0 where
// the zero weight removes it from every estimator moment anyway.
struct BellSplit {
    double q_plus = 0.0;
    double q_minus = 0.0;
};

inline BellSplit bell_split(cdouble mu_x, cdouble mu_y, cdouble tau_x, cdouble tau_y,
                            double alpha2_x, double alpha2_y) {
    const double t2x = std::norm(tau_x), t2y = std::norm(tau_y);
    if (t2x == 0.0 && t2y == 0.0) return {};
    if (alpha2_x <= 0.0 || alpha2_y <= 0.0)
        throw std::domain_error("auxiliary state lacks support on a sampled index");
    const double w = t2x / alpha2_x + t2y / alpha2_y;
    const double p2 = std::norm(mu_x) * alpha2_y + std::norm(mu_y) * alpha2_x;
    if (p2 <= 0.0) return {};  // zero conditional norm; unreachable for sampled pairs
    const double denom = 2.0 * p2 * w;
    const cdouble s = mu_x * tau_y;
    const cdouble t = mu_y * tau_x;
    return {std::norm(s + t) / denom, std::norm(s - t) / denom};
}

inline int draw_bell_outcome(const BellSplit& split, Rng& rng) {
    const double u = rng.uniform();
    if (u < split.q_plus) return +1;
    if (u < split.q_plus + split.q_minus) return -1;
    return 0;
}

}  // namespace detail

/// General protocol version: the auxiliary state alpha importance-samples mu.
/// The pair (x, y) is drawn by a fair coin (heads: x ~ |mu|^2, y ~ |alpha|^2;
/// tails the other way round), which reproduces
/// p(x,y) = (|mu_x|^2 |alpha_y|^2 + |mu_y|^2 |alpha_x|^2)/2 without ever
/// materializing the d^2 joint table.
class GeneralTrialSampler {
public:
    GeneralTrialSampler(StateVector mu, StateVector tau, StateVector alpha,
                        AmplitudeOracle tau_oracle, AmplitudeOracle alpha_oracle,
                        DiscreteSampler::Method method = DiscreteSampler::Method::alias)
        : mu_(std::move(mu)),
          tau_(std::move(tau)),
          alpha_(std::move(alpha)),
          tau_oracle_(std::move(tau_oracle)),
          alpha_oracle_(std::move(alpha_oracle)),
          mu_sampler_(DiscreteSampler::from_state(mu_, method)),
          alpha_sampler_(DiscreteSampler::from_state(alpha_, method)) {
        if (mu_.n_qubits() != tau_.n_qubits() || mu_.n_qubits() != alpha_.n_qubits())
            throw std::invalid_argument("register sizes must match");
    }

    TrialRecord sample(Rng& rng) const {
        std::uint64_t x, y;
        if (rng.bernoulli(0.5)) {
            x = mu_sampler_.sample(rng);
            y = alpha_sampler_.sample(rng);
        } else {
            y = mu_sampler_.sample(rng);
            x = alpha_sampler_.sample(rng);
        }
        const auto split = detail::bell_split(mu_[x], mu_[y], tau_[x], tau_[y],
                                              std::norm(alpha_[x]), std::norm(alpha_[y]));
        TrialRecord trial;
        trial.x = x;
        trial.y = y;
        trial.b = detail::draw_bell_outcome(split, rng);
        trial.weight = std::norm(tau_oracle_.query(x) / alpha_oracle_.query(x)) +
                       std::norm(tau_oracle_.query(y) / alpha_oracle_.query(y));
        return trial;
    }

private:
    StateVector mu_, tau_, alpha_;
    AmplitudeOracle tau_oracle_, alpha_oracle_;
    DiscreteSampler mu_sampler_, alpha_sampler_;
};

/// Basic protocol version: a uniformly random n-bit v replaces the auxiliary
/// register, y = x xor v, and alpha'_x = 2^{-n/2} identically. Equivalent to
/// the general version with a uniform auxiliary state.
class BasicTrialSampler {
public:
    BasicTrialSampler(StateVector mu, StateVector tau, AmplitudeOracle tau_oracle,
                      DiscreteSampler::Method method = DiscreteSampler::Method::alias)
        : mu_(std::move(mu)),
          tau_(std::move(tau)),
          tau_oracle_(std::move(tau_oracle)),
          mu_sampler_(DiscreteSampler::from_state(mu_, method)) {
        if (mu_.n_qubits() != tau_.n_qubits())
            throw std::invalid_argument("register sizes must match");
    }

    TrialRecord sample(Rng& rng) const {
        const std::uint64_t v = rng.uniform_bits(mu_.n_qubits());
        const std::uint64_t z = mu_sampler_.sample(rng);
        // the coin decides whether the |mu|^2-distributed index is x or y
        std::uint64_t x, y;
        if (rng.bernoulli(0.5)) {
            x = z;
            y = z ^ v;
        } else {
            x = z ^ v;
            y = z;
        }
        const double inv_alpha2 = static_cast<double>(mu_.dim());  // alpha_x = 2^{-n/2}
        const auto split = detail::bell_split(mu_[x], mu_[y], tau_[x], tau_[y],
                                              1.0 / inv_alpha2, 1.0 / inv_alpha2);
        TrialRecord trial;
        trial.x = x;
        trial.y = y;
        trial.b = detail::draw_bell_outcome(split, rng);
        trial.weight = inv_alpha2 * (std::norm(tau_oracle_.query(x)) +
                                     std::norm(tau_oracle_.query(y)));
        return trial;
    }

private:
    StateVector mu_, tau_;
    AmplitudeOracle tau_oracle_;
    DiscreteSampler mu_sampler_;
};

// --- exact joint distributions (test oracles; O(d^2) tables) ---

/// Exact joint distribution over (x, y, b) for the general version, from the
/// closed-form outcome probabilities. Index layout: x*d + y.
struct TrialDistribution {
    std::uint64_t d = 0;
    std::vector<double> p_plus, p_minus, p_zero;

    double total_mass() const {
        double s = 0.0;
        for (std::uint64_t i = 0; i < p_plus.size(); ++i)
            s += p_plus[i] + p_minus[i] + p_zero[i];
        return s;
    }
};

inline TrialDistribution trial_distribution_exact(const StateVector& mu, const StateVector& tau,
                                                  const StateVector& alpha) {
    if (mu.n_qubits() > 8)
        throw std::invalid_argument("exact trial distribution limited to 8 qubits");
    const std::uint64_t d = mu.dim();
    TrialDistribution dist;
    dist.d = d;
    dist.p_plus.assign(d * d, 0.0);
    dist.p_minus.assign(d * d, 0.0);
    dist.p_zero.assign(d * d, 0.0);
    for (std::uint64_t x = 0; x < d; ++x) {
        for (std::uint64_t y = 0; y < d; ++y) {
            const double a2x = std::norm(alpha[x]), a2y = std::norm(alpha[y]);
            const double t2x = std::norm(tau[x]), t2y = std::norm(tau[y]);
            const double pxy =
                0.5 * (std::norm(mu[x]) * a2y + std::norm(mu[y]) * a2x);
            const std::uint64_t i = x * d + y;
            if (t2x == 0.0 && t2y == 0.0) {
                dist.p_zero[i] = pxy;  // unpreparable comparison state; zero weight
                continue;
            }
            if ((a2x == 0.0 && t2x > 0.0) || (a2y == 0.0 && t2y > 0.0))
                throw std::domain_error("auxiliary state lacks support on the target");
            if (a2x == 0.0 || a2y == 0.0) {
                dist.p_zero[i] = pxy;  // p(x,y) = 0 here anyway
                continue;
            }
            const double w = t2x / a2x + t2y / a2y;
            const cdouble s = mu[x] * tau[y];
            const cdouble t = mu[y] * tau[x];
            dist.p_plus[i] = std::norm(s + t) / (4.0 * w);
            dist.p_minus[i] = std::norm(s - t) / (4.0 * w);
            dist.p_zero[i] = pxy - dist.p_plus[i] - dist.p_minus[i];
        }
    }
    return dist;
}

/// Exact joint distribution over (x, v, b) for the basic version, derived
/// independently from the feed-forward circuit algebra. Index layout: x*d + v.
inline TrialDistribution trial_distribution_basic(const StateVector& mu,
                                                  const StateVector& tau) {
    if (mu.n_qubits() > 8)
        throw std::invalid_argument("exact trial distribution limited to 8 qubits");
    const std::uint64_t d = mu.dim();
    TrialDistribution dist;
    dist.d = d;
    dist.p_plus.assign(d * d, 0.0);
    dist.p_minus.assign(d * d, 0.0);
    dist.p_zero.assign(d * d, 0.0);
    const double inv_joint = 1.0 / (2.0 * static_cast<double>(d));
    for (std::uint64_t x = 0; x < d; ++x) {
        for (std::uint64_t v = 0; v < d; ++v) {
            const std::uint64_t y = x ^ v;
            const double m2x = std::norm(mu[x]), m2y = std::norm(mu[y]);
            const double t2x = std::norm(tau[x]), t2y = std::norm(tau[y]);
            const double pxv = (m2x + m2y) * inv_joint;
            const std::uint64_t i = x * d + v;
            if (t2x == 0.0 && t2y == 0.0) {
                dist.p_zero[i] = pxv;
                continue;
            }
            const double denom = 2.0 * (m2x + m2y) * (t2x + t2y);
            if (denom == 0.0) {
                dist.p_zero[i] = pxv;
                continue;
            }
            const cdouble s = mu[x] * tau[y];
            const cdouble t = mu[y] * tau[x];
            dist.p_plus[i] = pxv * (std::norm(s + t) / denom);
            dist.p_minus[i] = pxv * (std::norm(s - t) / denom);
            dist.p_zero[i] = pxv - dist.p_plus[i] - dist.p_minus[i];
        }
    }
    return dist;
}

// --- estimators ---

struct SimpleEstimate {
    double a_tilde = 0.0;  // mean of w' b
    double b_tilde = 0.0;  // mean of w' b^2
    double f = std::numeric_limits<double>::quiet_NaN();
    bool defined = false;  // false when every b was 0
};

inline SimpleEstimate estimate_simple(std::span<const TrialRecord> trials) {
    if (trials.empty()) throw std::invalid_argument("estimator needs at least one trial");
    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& t : trials) {
        sum_a += t.weight * t.b;
        sum_b += t.weight * (t.b * t.b);
    }
    SimpleEstimate est;
    est.a_tilde = sum_a / static_cast<double>(trials.size());
    est.b_tilde = sum_b / static_cast<double>(trials.size());
    if (est.b_tilde > 0.0) {
        est.f = est.a_tilde / est.b_tilde;
        est.defined = true;
    }
    return est;
}

/// Ratio estimate with the O(1/N) bias correction and a delta-method plug-in
/// variance estimate. Estimates are reported raw (no clamping to [0, 1]) so
/// bias studies stay honest.
struct EstimateResult {
    double f_simple = std::numeric_limits<double>::quiet_NaN();
    double f_corrected = std::numeric_limits<double>::quiet_NaN();
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    double correction = 0.0;          // the multiplicative correction term
    double variance_estimate = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t n_trials = 0;
    bool insufficient_data = false;   // every b was 0: no estimate exists
    bool correction_defined = true;   // false when a_tilde == 0
};

inline EstimateResult estimate_bias_corrected(std::span<const TrialRecord> trials) {
    if (trials.size() < 2) throw std::invalid_argument("bias correction needs N >= 2");
    const auto simple = estimate_simple(trials);
    EstimateResult result;
    result.n_trials = trials.size();
    result.a_tilde = simple.a_tilde;
    result.b_tilde = simple.b_tilde;
    if (!simple.defined) {
        result.insufficient_data = true;
        result.correction_defined = false;
        return result;
    }
    result.f_simple = simple.f;

    const double n = static_cast<double>(trials.size());
    double var_a = 0.0, var_b = 0.0, cov_ab = 0.0;
    for (const auto& t : trials) {
        const double da = t.weight * t.b - simple.a_tilde;
        const double db = t.weight * (t.b * t.b) - simple.b_tilde;
        var_a += da * da;
        var_b += db * db;
        cov_ab += da * db;
    }
    const double scale = 1.0 / (n * (n - 1.0));
    var_a *= scale;   // estimates Var(A~)
    var_b *= scale;   // estimates Var(B~)
    cov_ab *= scale;  // estimates Cov(A~, B~)

    result.variance_estimate =
        (var_a - 2.0 * simple.f * cov_ab + simple.f * simple.f * var_b) /
        (simple.b_tilde * simple.b_tilde);

    if (simple.a_tilde != 0.0) {
        // E[A~/B~] = F (1 - Cov(A~,B~)/(A B) + Var(B~)/B^2) + O(1/N^2), so the
        // multiplicative correction that cancels the O(1/N) bias is
        // C = Cov(A~,B~)/(A B) - Var(B~)/B^2, with the moments estimated from
        // the same sample.
        const double correction =
            cov_ab / (simple.a_tilde * simple.b_tilde) -
            var_b / (simple.b_tilde * simple.b_tilde);
        result.correction = correction;
        result.f_corrected = simple.f * (1.0 + correction);
    } else {
        result.correction_defined = false;
        result.f_corrected = simple.f;
    }
    return result;
}

// --- one-call drivers ---

/// Run N trials of the basic version and estimate. Oracle defaults to the
/// true target amplitudes (scale 1).
inline EstimateResult run_verification(const StateVector& mu, const StateVector& tau,
                                       std::uint64_t shots, Rng& rng,
                                       std::vector<TrialRecord>* trial_log = nullptr) {
    BasicTrialSampler sampler(mu, tau, oracle_from_state(tau));
    std::vector<TrialRecord> trials;
    trials.reserve(shots);
    for (std::uint64_t i = 0; i < shots; ++i) trials.push_back(sampler.sample(rng));
    const auto result = estimate_bias_corrected(trials);
    if (trial_log) *trial_log = std::move(trials);
    return result;
}

/// General version with an explicit auxiliary state.
inline EstimateResult run_verification(const StateVector& mu, const StateVector& tau,
                                       const StateVector& alpha, std::uint64_t shots, Rng& rng,
                                       std::vector<TrialRecord>* trial_log = nullptr) {
    GeneralTrialSampler sampler(mu, tau, alpha, oracle_from_state(tau),
                                oracle_from_state(alpha));
    std::vector<TrialRecord> trials;
    trials.reserve(shots);
    for (std::uint64_t i = 0; i < shots; ++i) trials.push_back(sampler.sample(rng));
    const auto result = estimate_bias_corrected(trials);
    if (trial_log) *trial_log = std::move(trials);
    return result;
}

}  // namespace evaqs
