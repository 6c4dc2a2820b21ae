// noise.hpp
// Error models that turn ideal target states into noisy test states,
// calibrated to a prescribed infidelity:
//   - IQP rotation-angle perturbations, globally scaled to hit the target
//     infidelity (bisection on the scale; the perturbation direction is
//     drawn once so the error shape is seed-stable),
//   - multiplicative-plus-additive output noise for random circuits, with
//     the mixing weight solved so the normalized state hits the target
//     infidelity exactly,
//   - per-gate coherent errors for supremacy-style circuits, calibrated by
//     Monte Carlo to prescribed mean process infidelities.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evaqs/gates.hpp"
#include "evaqs/iqp.hpp"
#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"
#include "evaqs/supremacy.hpp"

namespace evaqs {

// --- IQP angle noise ---

struct AngleNoise {
    std::vector<double> deltas;  // unscaled per-angle perturbations
    double scale = 0.0;          // perturbed angles are theta_i + scale*delta_i
};

struct PerturbedIqp {
    StateVector mu;              // noisy state in the requested basis
    double achieved_infidelity = 0.0;
    AngleNoise noise;
    int redraws = 0;             // times the perturbation direction was redrawn
};

namespace detail {

// Fidelity between the ideal IQP state and the angle-perturbed one has the
// closed form F(s) = |mean_x exp(i s D_x)|^2 with
// D_x = sum_i delta_i (-1)^{x.A_i}, identical in both bases because the
// rotations commute. One O(m d) precompute, then O(d) per evaluation.
inline std::vector<double> iqp_perturbation_profile(const IqpCircuit& circuit,
                                                    const std::vector<double>& deltas) {
    const std::uint64_t d = std::uint64_t{1} << circuit.n_qubits;
    std::vector<double> profile(d, 0.0);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const std::uint64_t mask = circuit.rotations[i].mask;
        const double delta = deltas[i];
        for (std::uint64_t x = 0; x < d; ++x)
            profile[x] += (std::popcount(x & mask) & 1) ? -delta : delta;
    }
    return profile;
}

inline double iqp_infidelity_at_scale(const std::vector<double>& profile, double s) {
    double re = 0.0, im = 0.0;
    for (double dx : profile) {
        re += std::cos(s * dx);
        im += std::sin(s * dx);
    }
    const double inv = 1.0 / static_cast<double>(profile.size());
    return 1.0 - (re * re + im * im) * inv * inv;
}

}  // namespace detail

inline PerturbedIqp perturb_iqp(const IqpCircuit& circuit, double target_infidelity,
                                IqpBasis basis, Rng& rng) {
    if (!(target_infidelity > 0.0 && target_infidelity < 1.0))
        throw std::invalid_argument("target infidelity must be in (0, 1)");
    const int m = circuit.depth();

    for (int redraw = 0; redraw < 32; ++redraw) {
        std::vector<double> deltas(m);
        for (double& delta : deltas) delta = rng.gaussian();
        const auto profile = detail::iqp_perturbation_profile(circuit, deltas);

        // bracket the target infidelity, then bisect on the global scale
        double lo = 0.0, hi = 1e-3;
        bool bracketed = false;
        for (int i = 0; i < 64; ++i) {
            if (detail::iqp_infidelity_at_scale(profile, hi) >= target_infidelity) {
                bracketed = true;
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        if (!bracketed) continue;  // pathological draw (e.g. all deltas tiny)

        double scale = hi;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const double infid = detail::iqp_infidelity_at_scale(profile, mid);
            scale = mid;
            if (std::abs(infid - target_infidelity) <= 1e-9) break;
            if (infid < target_infidelity)
                lo = mid;
            else
                hi = mid;
        }

        IqpCircuit noisy = circuit;
        for (int i = 0; i < m; ++i) noisy.rotations[i].theta += scale * deltas[i];
        PerturbedIqp result{iqp_state(noisy, basis),
                            detail::iqp_infidelity_at_scale(profile, scale),
                            AngleNoise{std::move(deltas), scale}, redraw};
        return result;
    }
    throw std::runtime_error("angle-noise calibration failed to bracket the target infidelity");
}

// --- output noise for random circuits ---

struct OutputNoise {
    double eta = 0.0;             // mixing weight: mu ~ sqrt(1-eta) tau + sqrt(eta) eps
    double additive_scale = 0.0;  // lambda in eps_x ~ xi'_x tau_x + lambda xi''_x
    StateVector error_state;      // realized eps, normalized
    int redraws = 0;
};

struct NoisyOutput {
    StateVector mu;
    OutputNoise noise;
    double achieved_infidelity = 0.0;
};

inline NoisyOutput apply_output_noise(const StateVector& tau, double target_infidelity,
                                      Rng& rng) {
    if (!(target_infidelity > 0.0 && target_infidelity < 1.0))
        throw std::invalid_argument("target infidelity must be in (0, 1)");
    const std::uint64_t d = tau.dim();

    double mean_modulus = 0.0;
    for (std::uint64_t x = 0; x < d; ++x) mean_modulus += std::abs(tau[x]);
    mean_modulus /= static_cast<double>(d);
    const double lambda = mean_modulus;

    for (int redraw = 0; redraw < 32; ++redraw) {
        StateVector eps(tau.n_qubits());
        for (std::uint64_t x = 0; x < d; ++x)
            eps[x] = rng.complex_gaussian() * tau[x] + lambda * rng.complex_gaussian();
        const double norm2 = eps.norm_squared();
        if (norm2 <= 0.0) continue;
        eps.normalize();

        // F(eta) with mu = normalize(sqrt(1-eta) tau + sqrt(eta) eps); eps is
        // kept as drawn (not orthogonalized), so the overlap c enters both the
        // projection and the normalization.
        const cdouble c = inner_product(tau, eps);
        const double target_f = 1.0 - target_infidelity;
        if (std::norm(c) >= target_f) continue;  // eps too parallel to tau; redraw

        const auto fidelity_at = [&](double eta) {
            const double a = std::sqrt(1.0 - eta);
            const double b = std::sqrt(eta);
            const double overlap2 = std::norm(a + b * c);
            const double mu_norm2 = 1.0 + 2.0 * a * b * c.real();
            return overlap2 / mu_norm2;
        };

        double lo = 0.0, hi = 1.0;  // F(0) = 1 > target_f > F(1) = |c|^2
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (fidelity_at(mid) > target_f)
                lo = mid;
            else
                hi = mid;
        }
        const double eta = 0.5 * (lo + hi);

        StateVector mu(tau.n_qubits());
        const double a = std::sqrt(1.0 - eta);
        const double b = std::sqrt(eta);
        for (std::uint64_t x = 0; x < d; ++x) mu[x] = a * tau[x] + b * eps[x];
        mu.normalize();
        const double achieved = 1.0 - fidelity(mu, tau);
        return {std::move(mu), OutputNoise{eta, lambda, std::move(eps), redraw}, achieved};
    }
    throw std::runtime_error("output-noise calibration failed (error state parallel to target)");
}

// --- supremacy gate noise ---

struct GateNoise {
    double sigma1 = 0.0;  // std dev of the single-qubit error generators ex, ey, ez
    double sigma2 = 0.0;  // std dev of the entangler angle perturbations
};

/// 1 - |Tr(U_ideal^dag U_noisy)|^2 / 4^arity (process/entanglement fidelity
/// convention for unitaries).
inline double process_infidelity(const SingleQubitGate& ideal, const SingleQubitGate& noisy) {
    if (!ideal.is_unitary() || !noisy.is_unitary())
        throw std::invalid_argument("process infidelity requires unitary inputs");
    cdouble tr = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) tr += std::conj(ideal.m[k * 2 + i]) * noisy.m[k * 2 + i];
    return 1.0 - std::norm(tr) / 4.0;
}

inline double process_infidelity(const TwoQubitGate& ideal, const TwoQubitGate& noisy) {
    if (!ideal.is_unitary() || !noisy.is_unitary())
        throw std::invalid_argument("process infidelity requires unitary inputs");
    cdouble tr = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) tr += std::conj(ideal.m[k * 4 + i]) * noisy.m[k * 4 + i];
    return 1.0 - std::norm(tr) / 16.0;
}

/// Mean process infidelity of the single-qubit error unitary
/// exp(i(ex X + ey Y + ez Z)), ex,ey,ez ~ N(0, sigma^2), over frozen draws.
inline double mean_single_qubit_infidelity(double sigma, const std::vector<double>& norms) {
    double acc = 0.0;
    for (double r : norms) {
        const double s = std::sin(sigma * r);
        acc += s * s;  // PI of exp(i e.P) against identity is sin^2 |e|
    }
    return acc / static_cast<double>(norms.size());
}

/// Mean process infidelity of fSim(theta+dt, phi+dp) against fSim(theta, phi)
/// over frozen (dt, dp) draws; Tr = 1 + 2 cos(dt) + e^{-i dp} regardless of
/// the nominal angles.
inline double mean_two_qubit_infidelity(double sigma, const std::vector<std::pair<double, double>>& draws) {
    double acc = 0.0;
    for (const auto& [dt, dp] : draws) {
        const double re = 1.0 + 2.0 * std::cos(sigma * dt) + std::cos(sigma * dp);
        const double im = -std::sin(sigma * dp);
        acc += 1.0 - (re * re + im * im) / 16.0;
    }
    return acc / static_cast<double>(draws.size());
}

/// Calibrate (sigma1, sigma2) so the mean process infidelities hit the given
/// per-operation targets, by bisection over a frozen set of Monte Carlo draws.
inline GateNoise calibrate_gate_noise(double target_single, double target_two, Rng& rng,
                                      int draws = 10000) {
    std::vector<double> norms(draws);
    for (double& r : norms) {
        const double ex = rng.gaussian(), ey = rng.gaussian(), ez = rng.gaussian();
        r = std::sqrt(ex * ex + ey * ey + ez * ez);
    }
    std::vector<std::pair<double, double>> angle_draws(draws);
    for (auto& p : angle_draws) p = {rng.gaussian(), rng.gaussian()};

    const auto bisect = [](auto&& mean_at, double target) {
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mean_at(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    GateNoise noise;
    noise.sigma1 = bisect([&](double s) { return mean_single_qubit_infidelity(s, norms); },
                          target_single);
    noise.sigma2 = bisect([&](double s) { return mean_two_qubit_infidelity(s, angle_draws); },
                          target_two);
    return noise;
}

/// Default per-operation targets: 0.02% single-qubit, 0.2% two-qubit.
inline GateNoise calibrate_gate_noise(Rng& rng) {
    return calibrate_gate_noise(2e-4, 2e-3, rng);
}

/// Simulate the circuit with an i.i.d. coherent error unitary after every
/// single-qubit gate and perturbed entangler angles.
inline StateVector perturb_supremacy(const SupremacyCircuit& circuit, const GateNoise& noise,
                                     Rng& rng) {
    if (circuit.n_qubits() > 24) throw std::invalid_argument("statevector limit is 24 qubits");
    StateVector state(circuit.n_qubits());
    for (const auto& cycle : circuit.cycles) {
        for (int q = 0; q < circuit.n_qubits(); ++q) {
            apply_single_qubit(state, q, supremacy_single_qubit_gate(cycle.gate_ids[q]));
            if (noise.sigma1 > 0.0)
                apply_single_qubit(state, q,
                                   axis_rotation(noise.sigma1 * rng.gaussian(),
                                                 noise.sigma1 * rng.gaussian(),
                                                 noise.sigma1 * rng.gaussian()));
        }
        for (const auto& e : cycle.entanglers)
            apply_two_qubit(state, e.q1, e.q2,
                            fsim_gate(e.theta + noise.sigma2 * rng.gaussian(),
                                      e.phi + noise.sigma2 * rng.gaussian()));
    }
    return state;
}

/// First-order prediction of the noisy-output infidelity: the summed mean
/// per-operation process infidelities of every error inserted in the circuit.
inline double supremacy_error_budget(const SupremacyCircuit& circuit, const GateNoise& noise,
                                     Rng& rng, int draws = 10000) {
    std::vector<double> norms(draws);
    for (double& r : norms) {
        const double ex = rng.gaussian(), ey = rng.gaussian(), ez = rng.gaussian();
        r = std::sqrt(ex * ex + ey * ey + ez * ez);
    }
    std::vector<std::pair<double, double>> angle_draws(draws);
    for (auto& p : angle_draws) p = {rng.gaussian(), rng.gaussian()};
    std::uint64_t n_single = 0, n_two = 0;
    for (const auto& cycle : circuit.cycles) {
        n_single += circuit.n_qubits();
        n_two += cycle.entanglers.size();
    }
    return static_cast<double>(n_single) * mean_single_qubit_infidelity(noise.sigma1, norms) +
           static_cast<double>(n_two) * mean_two_qubit_infidelity(noise.sigma2, angle_draws);
}

}  // namespace evaqs
