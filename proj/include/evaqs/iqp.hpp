// iqp.hpp
// IQP circuits: commuting multiqubit X rotations applied to |0...0>.
// A circuit is the list of (mask, angle) pairs; simulation runs either in the
// computational basis (X rotations on |0..0>) or the Hadamard basis
// (Z rotations on |+>^n, where every output amplitude has modulus 2^{-n/2}
// and is computable in O(m) per basis state).

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evaqs/gates.hpp"
#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"

namespace evaqs {

enum class IqpBasis { computational, hadamard };

struct IqpRotation {
    std::uint64_t mask = 0;  // qubit subset, qubit 0 = LSB
    double theta = 0.0;      // radians
};

struct IqpCircuit {
    int n_qubits = 0;
    std::vector<IqpRotation> rotations;

    int depth() const { return static_cast<int>(rotations.size()); }

    bool has_zero_mask() const {
        for (const auto& r : rotations)
            if (r.mask == 0) return true;
        return false;
    }
};

/// Random IQP circuit: each mask from n Bernoulli trials with success
/// probability mean_weight/n, each angle uniform on [0, 2*pi).
inline IqpCircuit gen_iqp(int n_qubits, int depth, double mean_weight, Rng& rng) {
    if (n_qubits < 1 || depth < 1) throw std::invalid_argument("need n_qubits >= 1, depth >= 1");
    if (mean_weight <= 0.0 || mean_weight > static_cast<double>(n_qubits))
        throw std::invalid_argument("mean_weight must be in (0, n_qubits]");
    const double p = mean_weight / static_cast<double>(n_qubits);
    IqpCircuit circuit;
    circuit.n_qubits = n_qubits;
    circuit.rotations.reserve(depth);
    for (int i = 0; i < depth; ++i) {
        std::uint64_t mask = 0;
        for (int q = 0; q < n_qubits; ++q)
            if (rng.bernoulli(p)) mask |= std::uint64_t{1} << q;
        circuit.rotations.push_back({mask, rng.uniform(0.0, 2.0 * std::numbers::pi)});
    }
    return circuit;
}

/// Full output statevector. Computational basis: exp(i sum theta_i X^{A_i})|0..0>.
/// Hadamard basis: the same state conjugated by H^{(x)n}, built directly as
/// exp(i sum theta_i Z^{A_i})|+>^n.
inline StateVector iqp_state(const IqpCircuit& circuit, IqpBasis basis) {
    if (circuit.n_qubits > 24) throw std::invalid_argument("statevector limit is 24 qubits");
    if (basis == IqpBasis::computational) {
        StateVector state(circuit.n_qubits);
        for (const auto& r : circuit.rotations) apply_x_rotation(state, r.mask, r.theta);
        return state;
    }
    StateVector state = StateVector::uniform_superposition(circuit.n_qubits);
    for (const auto& r : circuit.rotations) apply_z_rotation(state, r.mask, r.theta);
    return state;
}

/// Hadamard-basis amplitude <x|xi> = 2^{-n/2} exp(i sum theta_i (-1)^{x.A_i}),
/// O(depth) per query.
inline cdouble iqp_amplitude_hadamard(const IqpCircuit& circuit, std::uint64_t x) {
    double phase = 0.0;
    for (const auto& r : circuit.rotations)
        phase += (std::popcount(x & r.mask) & 1) ? -r.theta : r.theta;
    const double modulus =
        std::pow(2.0, -0.5 * static_cast<double>(circuit.n_qubits));
    return std::polar(modulus, phase);
}

/// Computational-basis amplitude by direct expansion of the commuting product:
/// tau_x = sum over v in {0,1}^m with (+)_{i: v_i=1} A_i = x of
/// prod_i beta_i(v_i), beta_i(0) = cos(theta_i), beta_i(1) = i sin(theta_i).
/// Exponential in depth; test oracle only.
inline cdouble iqp_amplitude_computational_bruteforce(const IqpCircuit& circuit,
                                                      std::uint64_t x) {
    const int m = circuit.depth();
    if (m > 24) throw std::invalid_argument("brute-force amplitude limited to depth 24");
    cdouble total = 0.0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
        std::uint64_t reached = 0;
        cdouble term = 1.0;
        for (int i = 0; i < m; ++i) {
            const auto& r = circuit.rotations[i];
            if ((v >> i) & 1) {
                reached ^= r.mask;
                term *= cdouble{0.0, std::sin(r.theta)};
            } else {
                term *= std::cos(r.theta);
            }
        }
        if (reached == x) total += term;
    }
    return total;
}

}  // namespace evaqs
