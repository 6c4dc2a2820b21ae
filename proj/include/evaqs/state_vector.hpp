// state_vector.hpp
// Dense complex statevector over the 2^n computational basis states.
//
// Index convention used throughout the library: amplitudes are stored in a
// flat array indexed by the integer reading of the basis bitstring, with
// qubit 0 as the least significant bit. |q_{n-1} ... q_1 q_0> lives at index
// q_0 + 2*q_1 + ... + 2^{n-1}*q_{n-1}.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace evaqs {

using cdouble = std::complex<double>;

class StateVector {
public:
    /// |0...0> on n qubits.
    explicit StateVector(int n_qubits)
        : n_qubits_(check_qubits(n_qubits)), amps_(std::uint64_t{1} << n_qubits) {
        amps_[0] = 1.0;
    }

    static StateVector basis_state(int n_qubits, std::uint64_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) throw std::out_of_range("basis index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    static StateVector uniform_superposition(int n_qubits) {
        StateVector s(n_qubits);
        const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
        for (auto& amp : s.amps_) amp = a;
        return s;
    }

    /// Adopts the given amplitudes without normalizing.
    static StateVector from_amplitudes(int n_qubits, std::vector<cdouble> amps) {
        if (amps.size() != (std::uint64_t{1} << check_qubits(n_qubits)))
            throw std::invalid_argument("amplitude count does not match qubit count");
        StateVector s(n_qubits);
        s.amps_ = std::move(amps);
        return s;
    }

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }

    cdouble& operator[](std::uint64_t x) { return amps_[x]; }
    const cdouble& operator[](std::uint64_t x) const { return amps_[x]; }

    std::span<const cdouble> amplitudes() const { return amps_; }
    std::span<cdouble> amplitudes() { return amps_; }

    double probability(std::uint64_t x) const { return std::norm(amps_[x]); }

    /// |amplitude|^2 for every basis state, in index order.
    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::uint64_t x = 0; x < amps_.size(); ++x) p[x] = std::norm(amps_[x]);
        return p;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    bool is_normalized(double tol = 1e-12) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    void normalize() {
        const double n2 = norm_squared();
        if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero state");
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amps_) a *= inv;
    }

private:
    static int check_qubits(int n) {
        if (n < 1 || n > 30) throw std::invalid_argument("qubit count must be in [1, 30]");
        return n;
    }

    int n_qubits_;
    std::vector<cdouble> amps_;
};

/// <a|b>.
inline cdouble inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("inner product requires equal qubit counts");
    cdouble s = 0.0;
    for (std::uint64_t x = 0; x < a.dim(); ++x) s += std::conj(a[x]) * b[x];
    return s;
}

/// Fidelity |<a|b>|^2 of two normalized pure states.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

inline double infidelity(const StateVector& a, const StateVector& b) {
    return 1.0 - fidelity(a, b);
}

}  // namespace evaqs
