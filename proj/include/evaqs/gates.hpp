// gates.hpp
// Unitary gate matrices and the strided kernels that apply them in place.
//
// Two-qubit gates act in the basis |b2 b1> where b1 is the bit of the first
// qubit argument and b2 the bit of the second: gate basis index
// j = bit(q1) + 2*bit(q2). Multiqubit X/Z rotations act on the subset of
// qubits selected by a bitmask (qubit 0 = least significant bit).

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "evaqs/state_vector.hpp"

namespace evaqs {

struct SingleQubitGate {
    std::array<cdouble, 4> m{};  // row-major 2x2

    /// Max entrywise deviation of U†U from the identity.
    double unitarity_error() const {
        double worst = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                cdouble s = 0.0;
                for (int k = 0; k < 2; ++k) s += std::conj(m[k * 2 + i]) * m[k * 2 + j];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        }
        return worst;
    }

    bool is_unitary(double tol = 1e-10) const { return unitarity_error() <= tol; }
};

struct TwoQubitGate {
    std::array<cdouble, 16> m{};  // row-major 4x4

    double unitarity_error() const {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                cdouble s = 0.0;
                for (int k = 0; k < 4; ++k) s += std::conj(m[k * 4 + i]) * m[k * 4 + j];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        }
        return worst;
    }

    bool is_unitary(double tol = 1e-10) const { return unitarity_error() <= tol; }
};

// --- named gates ---

inline SingleQubitGate identity_gate() { return {{1.0, 0.0, 0.0, 1.0}}; }

inline SingleQubitGate pauli_x() { return {{0.0, 1.0, 1.0, 0.0}}; }

inline SingleQubitGate hadamard_gate() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {{s, s, s, -s}};
}

// Square roots of X, Y and W = (X+Y)/sqrt(2), phased so each squares to its
// generator exactly; the single-qubit set of the planar-lattice
// supremacy-style circuits.
inline SingleQubitGate sqrt_x() {
    const cdouble p{0.5, 0.5}, q{0.5, -0.5};
    return {{p, q, q, p}};
}

inline SingleQubitGate sqrt_y() {
    const cdouble p{0.5, 0.5};
    return {{p, -p, p, p}};
}

inline SingleQubitGate sqrt_w() {
    const cdouble p{0.5, 0.5};
    const double s = std::numbers::sqrt2 / 2.0;
    return {{p, cdouble{0.0, -s}, cdouble{s, 0.0}, p}};
}

/// exp(i(ex*X + ey*Y + ez*Z)); the coherent single-qubit error unitary.
inline SingleQubitGate axis_rotation(double ex, double ey, double ez) {
    const double r = std::sqrt(ex * ex + ey * ey + ez * ez);
    if (r == 0.0) return identity_gate();
    const double c = std::cos(r);
    const double s = std::sin(r) / r;
    return {{cdouble{c, s * ez}, cdouble{s * ey, s * ex}, cdouble{-s * ey, s * ex},
             cdouble{c, -s * ez}}};
}

inline TwoQubitGate identity_gate2() {
    TwoQubitGate g;
    for (int i = 0; i < 4; ++i) g.m[i * 4 + i] = 1.0;
    return g;
}

inline TwoQubitGate swap_gate() {
    TwoQubitGate g;
    g.m[0] = 1.0;
    g.m[1 * 4 + 2] = 1.0;
    g.m[2 * 4 + 1] = 1.0;
    g.m[3 * 4 + 3] = 1.0;
    return g;
}

/// fSim-form entangler: iSWAP-like rotation by theta with a conditional phase
/// phi on |11>.
inline TwoQubitGate fsim_gate(double theta, double phi) {
    TwoQubitGate g;
    const cdouble mis{0.0, -std::sin(theta)};
    g.m[0] = 1.0;
    g.m[1 * 4 + 1] = std::cos(theta);
    g.m[1 * 4 + 2] = mis;
    g.m[2 * 4 + 1] = mis;
    g.m[2 * 4 + 2] = std::cos(theta);
    g.m[3 * 4 + 3] = std::polar(1.0, -phi);
    return g;
}

// --- kernels ---

inline void apply_single_qubit(StateVector& state, int qubit, const SingleQubitGate& gate) {
    if (qubit < 0 || qubit >= state.n_qubits()) throw std::out_of_range("qubit index out of range");
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    const std::uint64_t lo = mask - 1;
    const std::uint64_t hi = ~lo;
    const std::uint64_t half = state.dim() >> 1;
    const cdouble m00 = gate.m[0], m01 = gate.m[1], m10 = gate.m[2], m11 = gate.m[3];
    auto amps = state.amplitudes();
    for (std::uint64_t k = 0; k < half; ++k) {
        const std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
        const std::uint64_t i1 = i0 | mask;
        const cdouble a0 = amps[i0];
        const cdouble a1 = amps[i1];
        amps[i0] = m00 * a0 + m01 * a1;
        amps[i1] = m10 * a0 + m11 * a1;
    }
}

namespace detail {
inline std::uint64_t insert_zero_bit(std::uint64_t v, int pos) {
    const std::uint64_t lo = v & ((std::uint64_t{1} << pos) - 1);
    return ((v >> pos) << (pos + 1)) | lo;
}
}  // namespace detail

inline void apply_two_qubit(StateVector& state, int q1, int q2, const TwoQubitGate& gate) {
    if (q1 < 0 || q1 >= state.n_qubits() || q2 < 0 || q2 >= state.n_qubits())
        throw std::out_of_range("qubit index out of range");
    if (q1 == q2) throw std::invalid_argument("two-qubit gate requires distinct qubits");
    const std::uint64_t mask1 = std::uint64_t{1} << q1;
    const std::uint64_t mask2 = std::uint64_t{1} << q2;
    const int low = std::min(q1, q2);
    const int high = std::max(q1, q2);
    const std::uint64_t quarter = state.dim() >> 2;
    auto amps = state.amplitudes();
    for (std::uint64_t k = 0; k < quarter; ++k) {
        const std::uint64_t base =
            detail::insert_zero_bit(detail::insert_zero_bit(k, low), high);
        const std::array<std::uint64_t, 4> idx{base, base | mask1, base | mask2,
                                               base | mask1 | mask2};
        std::array<cdouble, 4> in;
        for (int j = 0; j < 4; ++j) in[j] = amps[idx[j]];
        for (int r = 0; r < 4; ++r) {
            cdouble acc = 0.0;
            for (int c = 0; c < 4; ++c) acc += gate.m[r * 4 + c] * in[c];
            amps[idx[r]] = acc;
        }
    }
}

/// exp(i*theta*X^mask): a'_x = cos(theta)*a_x + i*sin(theta)*a_{x xor mask}.
/// A zero mask is the global phase e^{i*theta}.
inline void apply_x_rotation(StateVector& state, std::uint64_t mask, double theta) {
    if (mask >= state.dim()) throw std::out_of_range("rotation mask wider than register");
    auto amps = state.amplitudes();
    if (mask == 0) {
        const cdouble phase = std::polar(1.0, theta);
        for (auto& a : amps) a *= phase;
        return;
    }
    const double c = std::cos(theta);
    const cdouble is{0.0, std::sin(theta)};
    for (std::uint64_t x = 0; x < state.dim(); ++x) {
        const std::uint64_t y = x ^ mask;
        if (y < x) continue;  // each pair once
        const cdouble ax = amps[x];
        const cdouble ay = amps[y];
        amps[x] = c * ax + is * ay;
        amps[y] = c * ay + is * ax;
    }
}

/// exp(i*theta*Z^mask): a'_x = exp(i*theta*(-1)^{popcount(x & mask)})*a_x.
inline void apply_z_rotation(StateVector& state, std::uint64_t mask, double theta) {
    if (mask >= state.dim()) throw std::out_of_range("rotation mask wider than register");
    const cdouble plus = std::polar(1.0, theta);
    const cdouble minus = std::polar(1.0, -theta);
    auto amps = state.amplitudes();
    for (std::uint64_t x = 0; x < state.dim(); ++x)
        amps[x] *= (std::popcount(x & mask) & 1) ? minus : plus;
}

/// H on every qubit (n butterfly passes).
inline void apply_hadamard_all(StateVector& state) {
    const auto h = hadamard_gate();
    for (int q = 0; q < state.n_qubits(); ++q) apply_single_qubit(state, q, h);
}

}  // namespace evaqs
