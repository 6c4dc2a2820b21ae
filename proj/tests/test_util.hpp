// Shared test helpers: dense linear-algebra oracles kept independent of the
// library's strided kernels (full matrices, explicit embeddings, Taylor
// matrix exponential), random-state generators and a chi-square
// goodness-of-fit helper.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "evaqs/protocol.hpp"
#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"

namespace testutil {

using evaqs::cdouble;
using Matrix = std::vector<std::vector<cdouble>>;

inline Matrix identity_matrix(std::size_t d) {
    Matrix m(d, std::vector<cdouble>(d));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
    return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    const std::size_t d = a.size();
    Matrix out(d, std::vector<cdouble>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const cdouble aik = a[i][k];
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < d; ++j) out[i][j] += aik * b[k][j];
        }
    return out;
}

inline std::vector<cdouble> matvec(const Matrix& m, const std::vector<cdouble>& v) {
    std::vector<cdouble> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t da = a.size(), db = b.size();
    Matrix out(da * db, std::vector<cdouble>(da * db));
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out[i * db + k][j * db + l] = a[i][j] * b[k][l];
    return out;
}

// Embed a 2x2 gate on one qubit of an n-qubit register by Kronecker products;
// with qubit 0 as the least significant bit the full matrix is
// I_{2^(n-1-q)} (x) U (x) I_{2^q}.
inline Matrix embed_single(int n_qubits, int qubit, const std::array<cdouble, 4>& u) {
    Matrix gate{{u[0], u[1]}, {u[2], u[3]}};
    return kron(identity_matrix(std::size_t{1} << (n_qubits - 1 - qubit)),
                kron(gate, identity_matrix(std::size_t{1} << qubit)));
}

// Embed a 4x4 gate on (q1, q2) by direct index bookkeeping (gate basis index
// = bit(q1) + 2*bit(q2)); a deliberately different route from the kernels.
inline Matrix embed_two(int n_qubits, int q1, int q2, const std::array<cdouble, 16>& u) {
    const std::uint64_t d = std::uint64_t{1} << n_qubits;
    Matrix out(d, std::vector<cdouble>(d));
    for (std::uint64_t col = 0; col < d; ++col) {
        const int c = static_cast<int>(((col >> q1) & 1) | (((col >> q2) & 1) << 1));
        for (int r = 0; r < 4; ++r) {
            std::uint64_t row = col;
            row &= ~((std::uint64_t{1} << q1) | (std::uint64_t{1} << q2));
            if (r & 1) row |= std::uint64_t{1} << q1;
            if (r & 2) row |= std::uint64_t{1} << q2;
            out[row][col] += u[r * 4 + c];
        }
    }
    return out;
}

// exp(M) by scaling-and-squaring with a Taylor series.
inline Matrix expm(const Matrix& m) {
    double norm = 0.0;
    for (const auto& row : m) {
        double s = 0.0;
        for (const auto& z : row) s += std::abs(z);
        norm = std::max(norm, s);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Matrix scaled = m;
    for (auto& row : scaled)
        for (auto& z : row) z *= scale;
    Matrix result = identity_matrix(m.size());
    Matrix term = identity_matrix(m.size());
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, scaled);
        for (auto& row : term)
            for (auto& z : row) z *= 1.0 / k;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

inline evaqs::StateVector random_state(int n_qubits, evaqs::Rng& rng) {
    evaqs::StateVector state(n_qubits);
    for (std::uint64_t x = 0; x < state.dim(); ++x) state[x] = rng.complex_gaussian();
    state.normalize();
    return state;
}

inline std::vector<cdouble> to_vector(const evaqs::StateVector& s) {
    return {s.amplitudes().begin(), s.amplitudes().end()};
}

inline double max_amplitude_diff(const evaqs::StateVector& a, const std::vector<cdouble>& b) {
    double worst = 0.0;
    for (std::uint64_t x = 0; x < a.dim(); ++x) worst = std::max(worst, std::abs(a[x] - b[x]));
    return worst;
}

inline double max_amplitude_diff(const evaqs::StateVector& a, const evaqs::StateVector& b) {
    return max_amplitude_diff(a, to_vector(b));
}

// Pearson chi-square statistic with low-expectation bins pooled; returns
// (statistic, degrees of freedom = pooled bins - 1).
struct ChiSquareGof {
    double statistic = 0.0;
    int dof = 0;
};

inline ChiSquareGof chi_square_gof(const std::vector<double>& observed_counts,
                                   const std::vector<double>& expected_probs,
                                   double n_draws, double min_expected = 5.0) {
    double pooled_obs = 0.0, pooled_exp = 0.0;
    double stat = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed_counts.size(); ++i) {
        const double e = expected_probs[i] * n_draws;
        if (e < min_expected) {
            pooled_obs += observed_counts[i];
            pooled_exp += e;
            continue;
        }
        const double diff = observed_counts[i] - e;
        stat += diff * diff / e;
        ++bins;
    }
    if (pooled_exp > 0.0) {
        const double diff = pooled_obs - pooled_exp;
        stat += diff * diff / pooled_exp;
        ++bins;
    }
    return {stat, bins - 1};
}

// Wilson-Hilferty approximation of the chi-square quantile at significance
// 0.001 (z = 3.0902...); within a few percent of the exact value for the
// degrees of freedom used here.
inline double chi_square_critical_001(int dof) {
    const double z = 3.090232306167814;
    const double k = static_cast<double>(dof);
    const double term = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * term * term * term;
}

// Expectations of w' b and w' b^2 over an exact trial distribution, with the
// weight computed from oracle values exactly as the estimator would.
struct ExactMoments {
    double wb = 0.0;   // <w' b>
    double wb2 = 0.0;  // <w' b^2>
};

inline ExactMoments exact_moments(const evaqs::TrialDistribution& dist,
                                  const evaqs::AmplitudeOracle& tau_oracle,
                                  const evaqs::AmplitudeOracle& alpha_oracle) {
    const std::uint64_t d = dist.d;
    std::vector<double> ratio(d);
    for (std::uint64_t x = 0; x < d; ++x)
        ratio[x] = std::norm(tau_oracle.query(x) / alpha_oracle.query(x));
    ExactMoments m;
    for (std::uint64_t x = 0; x < d; ++x)
        for (std::uint64_t y = 0; y < d; ++y) {
            const std::uint64_t i = x * d + y;
            const double w = ratio[x] + ratio[y];
            m.wb += w * (dist.p_plus[i] - dist.p_minus[i]);
            m.wb2 += w * (dist.p_plus[i] + dist.p_minus[i]);
        }
    return m;
}

}  // namespace testutil
