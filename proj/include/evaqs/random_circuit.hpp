// random_circuit.hpp
// Circuits of Haar-random 2-qubit unitaries on uniformly chosen qubit pairs.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evaqs/gates.hpp"
#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"

namespace evaqs {

struct RandomGate {
    int q1 = 0;
    int q2 = 1;
    TwoQubitGate gate;
};

struct RandomCircuit {
    int n_qubits = 0;
    std::vector<RandomGate> gates;

    int depth() const { return static_cast<int>(gates.size()); }
};

/// Haar-random 4x4 unitary: complex Gaussian matrix, Gram-Schmidt on the
/// columns. Degenerate draws (a column collapsing under projection) are
/// retried; they have probability zero and only guard against pathological
/// generator states.
inline TwoQubitGate random_unitary_4x4(Rng& rng) {
    for (;;) {
        std::array<cdouble, 16> a;
        for (auto& z : a) z = rng.complex_gaussian();
        bool degenerate = false;
        for (int col = 0; col < 4 && !degenerate; ++col) {
            for (int prev = 0; prev < col; ++prev) {
                cdouble overlap = 0.0;
                for (int row = 0; row < 4; ++row)
                    overlap += std::conj(a[row * 4 + prev]) * a[row * 4 + col];
                for (int row = 0; row < 4; ++row)
                    a[row * 4 + col] -= overlap * a[row * 4 + prev];
            }
            double norm2 = 0.0;
            for (int row = 0; row < 4; ++row) norm2 += std::norm(a[row * 4 + col]);
            if (norm2 < 1e-24) {
                degenerate = true;
                break;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (int row = 0; row < 4; ++row) a[row * 4 + col] *= inv;
        }
        if (!degenerate) return TwoQubitGate{a};
    }
}

inline RandomCircuit gen_random_circuit(int n_qubits, int depth, Rng& rng) {
    if (n_qubits < 2) throw std::invalid_argument("random circuits need at least 2 qubits");
    RandomCircuit circuit;
    circuit.n_qubits = n_qubits;
    circuit.gates.reserve(depth);
    for (int i = 0; i < depth; ++i) {
        const int q1 = static_cast<int>(rng.uniform_index(n_qubits));
        int q2 = static_cast<int>(rng.uniform_index(n_qubits - 1));
        if (q2 >= q1) ++q2;
        circuit.gates.push_back({q1, q2, random_unitary_4x4(rng)});
    }
    return circuit;
}

inline StateVector simulate_random_circuit(const RandomCircuit& circuit) {
    if (circuit.n_qubits > 24) throw std::invalid_argument("statevector limit is 24 qubits");
    StateVector state(circuit.n_qubits);
    for (const auto& g : circuit.gates) apply_two_qubit(state, g.q1, g.q2, g.gate);
    return state;
}

}  // namespace evaqs
