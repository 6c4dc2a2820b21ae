// supremacy.hpp
// Planar-lattice circuits in the style of the quantum-supremacy experiments:
// cycles alternating random single-qubit gates from {sqrt(X), sqrt(Y),
// sqrt(W)} (no immediate repetition on a qubit) with fSim entanglers laid out
// in four directional coupling patterns that together cover the grid.
//
// These layout details are deliberate implementation choices kept behind the
// SupremacyCircuit type so they can be swapped without touching callers.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evaqs/gates.hpp"
#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"

namespace evaqs {

inline constexpr double kEntanglerTheta = std::numbers::pi / 2.0;
inline constexpr double kEntanglerPhi = std::numbers::pi / 6.0;

struct GridShape {
    int rows = 0;
    int cols = 0;
};

/// Grid for the supported study sizes; sides differ by at most one.
inline GridShape supremacy_grid(int n_qubits) {
    switch (n_qubits) {
        case 4: return {2, 2};
        case 9: return {3, 3};
        case 12: return {3, 4};
        case 16: return {4, 4};
        case 20: return {4, 5};
        default: throw std::invalid_argument("supported sizes are n in {4, 9, 12, 16, 20}");
    }
}

struct SupremacyEntangler {
    int q1 = 0;
    int q2 = 0;
    double theta = kEntanglerTheta;
    double phi = kEntanglerPhi;
};

struct SupremacyCycle {
    std::vector<int> gate_ids;  // per qubit, index into {sqrt X, sqrt Y, sqrt W}
    int pattern = 0;            // which directional coupling this cycle uses
    std::vector<SupremacyEntangler> entanglers;
};

struct SupremacyCircuit {
    int rows = 0;
    int cols = 0;
    std::vector<SupremacyCycle> cycles;

    int n_qubits() const { return rows * cols; }
    int n_cycles() const { return static_cast<int>(cycles.size()); }
};

inline const SingleQubitGate& supremacy_single_qubit_gate(int id) {
    static const std::array<SingleQubitGate, 3> gates{sqrt_x(), sqrt_y(), sqrt_w()};
    return gates.at(id);
}

/// Entangler pairs for one directional pattern: 0/1 horizontal with even/odd
/// anchor column, 2/3 vertical with even/odd anchor row.
inline std::vector<SupremacyEntangler> supremacy_pattern_pairs(const GridShape& grid,
                                                               int pattern) {
    std::vector<SupremacyEntangler> pairs;
    const auto qubit = [&](int r, int c) { return r * grid.cols + c; };
    if (pattern == 0 || pattern == 1) {
        for (int r = 0; r < grid.rows; ++r)
            for (int c = (pattern == 0 ? 0 : 1); c + 1 < grid.cols; c += 2)
                pairs.push_back({qubit(r, c), qubit(r, c + 1)});
    } else {
        for (int r = (pattern == 2 ? 0 : 1); r + 1 < grid.rows; r += 2)
            for (int c = 0; c < grid.cols; ++c)
                pairs.push_back({qubit(r, c), qubit(r + 1, c)});
    }
    return pairs;
}

inline SupremacyCircuit gen_supremacy_circuit(int n_qubits, int n_cycles, Rng& rng) {
    const GridShape grid = supremacy_grid(n_qubits);
    SupremacyCircuit circuit;
    circuit.rows = grid.rows;
    circuit.cols = grid.cols;
    circuit.cycles.reserve(n_cycles);
    std::vector<int> last(n_qubits, -1);
    for (int c = 0; c < n_cycles; ++c) {
        SupremacyCycle cycle;
        cycle.gate_ids.resize(n_qubits);
        for (int q = 0; q < n_qubits; ++q) {
            int id;
            if (last[q] < 0) {
                id = static_cast<int>(rng.uniform_index(3));
            } else {
                // uniform over the two gates other than the previous one
                id = static_cast<int>(rng.uniform_index(2));
                if (id >= last[q]) ++id;
            }
            cycle.gate_ids[q] = id;
            last[q] = id;
        }
        cycle.pattern = c % 4;
        cycle.entanglers = supremacy_pattern_pairs(grid, cycle.pattern);
        circuit.cycles.push_back(std::move(cycle));
    }
    return circuit;
}

inline StateVector simulate_supremacy(const SupremacyCircuit& circuit) {
    if (circuit.n_qubits() > 24) throw std::invalid_argument("statevector limit is 24 qubits");
    StateVector state(circuit.n_qubits());
    for (const auto& cycle : circuit.cycles) {
        for (int q = 0; q < circuit.n_qubits(); ++q)
            apply_single_qubit(state, q, supremacy_single_qubit_gate(cycle.gate_ids[q]));
        for (const auto& e : cycle.entanglers)
            apply_two_qubit(state, e.q1, e.q2, fsim_gate(e.theta, e.phi));
    }
    return state;
}

}  // namespace evaqs
