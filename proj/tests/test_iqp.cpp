#include <doctest.h>

#include "evaqs/iqp.hpp"
#include "test_util.hpp"

using namespace evaqs;

TEST_CASE("gen_iqp validates parameters") {
    Rng rng(1);
    CHECK_THROWS_AS(gen_iqp(0, 3, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_iqp(4, 3, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_iqp(4, 3, 5.0, rng), std::invalid_argument);
}

TEST_CASE("mean_weight = n makes every mask all-ones") {
    Rng rng(2);
    const auto c = gen_iqp(5, 20, 5.0, rng);
    for (const auto& r : c.rotations) CHECK(r.mask == 0b11111);
}

TEST_CASE("mask popcounts average mean_weight (binomial, 5 sigma)") {
    Rng rng(3);
    const int n = 8, m = 10000;
    const auto c = gen_iqp(n, m, 2.0, rng);
    double total = 0.0;
    for (const auto& r : c.rotations) total += std::popcount(r.mask);
    const double mean = total / m;
    // popcount ~ Binomial(n, 2/n): variance = 2(1 - 2/n) per mask
    const double sigma_mean = std::sqrt(2.0 * (1.0 - 2.0 / n) / m);
    CHECK(std::abs(mean - 2.0) < 5.0 * sigma_mean);
}

TEST_CASE("same seed reproduces the circuit") {
    Rng a(42), b(42);
    const auto ca = gen_iqp(6, 18, 2.0, a);
    const auto cb = gen_iqp(6, 18, 2.0, b);
    REQUIRE(ca.rotations.size() == cb.rotations.size());
    for (std::size_t i = 0; i < ca.rotations.size(); ++i) {
        CHECK(ca.rotations[i].mask == cb.rotations[i].mask);
        CHECK(ca.rotations[i].theta == cb.rotations[i].theta);
    }
}

TEST_CASE("single rotation produces cos|00> + i sin|10>") {
    IqpCircuit c{2, {{0b10, 0.9}}};
    const auto state = iqp_state(c, IqpBasis::computational);
    CHECK(std::abs(state[0] - cdouble{std::cos(0.9), 0.0}) < 1e-14);
    CHECK(std::abs(state[2] - cdouble{0.0, std::sin(0.9)}) < 1e-14);
}

TEST_CASE("hadamard-basis amplitudes all have modulus 2^{-n/2}") {
    Rng rng(5);
    for (int n : {2, 3, 6}) {
        const auto c = gen_iqp(n, 3 * n, 2.0, rng);
        const auto state = iqp_state(c, IqpBasis::hadamard);
        const double expected = std::pow(2.0, -0.5 * n);
        for (std::uint64_t x = 0; x < state.dim(); ++x)
            CHECK(std::abs(std::abs(state[x]) - expected) < 1e-13);
    }
}

TEST_CASE("computational-basis state matches the dense expm oracle") {
    Rng rng(7);
    const int n = 3, m = 9;
    const auto c = gen_iqp(n, m, 2.0, rng);

    // dense exp(i sum theta_i X^{A_i}) via embedded Pauli factors
    auto generator = testutil::identity_matrix(8);
    for (auto& row : generator)
        for (auto& z : row) z = 0.0;
    for (const auto& r : c.rotations) {
        auto x_mask = testutil::identity_matrix(8);
        for (int q = 0; q < n; ++q)
            if ((r.mask >> q) & 1)
                x_mask = testutil::matmul(x_mask, testutil::embed_single(n, q, pauli_x().m));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                generator[i][j] += cdouble{0.0, r.theta} * x_mask[i][j];
    }
    const auto dense = testutil::expm(generator);
    std::vector<cdouble> zero(8);
    zero[0] = 1.0;
    const auto expected = testutil::matvec(dense, zero);

    const auto state = iqp_state(c, IqpBasis::computational);
    CHECK(testutil::max_amplitude_diff(state, expected) < 1e-10);
}

TEST_CASE("hadamard amplitude formula") {
    SUBCASE("all angles zero") {
        IqpCircuit c{3, {{0b101, 0.0}, {0b011, 0.0}}};
        for (std::uint64_t x = 0; x < 8; ++x)
            CHECK(std::abs(iqp_amplitude_hadamard(c, x) - cdouble{std::pow(2.0, -1.5), 0.0}) <
                  1e-15);
    }
    SUBCASE("single rotation on qubit 0") {
        const double theta = 1.3;
        IqpCircuit c{2, {{0b01, theta}}};
        for (std::uint64_t x = 0; x < 4; ++x) {
            const double sign = (x & 1) ? -1.0 : 1.0;
            CHECK(std::abs(iqp_amplitude_hadamard(c, x) - 0.5 * std::polar(1.0, sign * theta)) <
                  1e-14);
        }
    }
    SUBCASE("matches the statevector entrywise on random circuits up to n=6") {
        Rng rng(11);
        for (int n : {4, 6}) {
            const auto c = gen_iqp(n, 3 * n, 2.0, rng);
            const auto state = iqp_state(c, IqpBasis::hadamard);
            for (std::uint64_t x = 0; x < state.dim(); ++x)
                CHECK(std::abs(iqp_amplitude_hadamard(c, x) - state[x]) < 1e-12);
        }
    }
}

TEST_CASE("brute-force computational amplitude") {
    SUBCASE("single rotation cases") {
        const double theta = 0.4;
        IqpCircuit c{2, {{0b10, theta}}};
        CHECK(std::abs(iqp_amplitude_computational_bruteforce(c, 0) -
                       cdouble{std::cos(theta), 0.0}) < 1e-15);
        CHECK(std::abs(iqp_amplitude_computational_bruteforce(c, 2) -
                       cdouble{0.0, std::sin(theta)}) < 1e-15);
        CHECK(std::abs(iqp_amplitude_computational_bruteforce(c, 1)) < 1e-15);
    }
    SUBCASE("full vector matches the statevector, n=3 m=6") {
        Rng rng(13);
        const auto c = gen_iqp(3, 6, 2.0, rng);
        const auto state = iqp_state(c, IqpBasis::computational);
        for (std::uint64_t x = 0; x < state.dim(); ++x)
            CHECK(std::abs(iqp_amplitude_computational_bruteforce(c, x) - state[x]) < 1e-10);
    }
}

TEST_CASE("H^n maps the computational-basis state to the hadamard-basis state") {
    Rng rng(17);
    for (int n : {2, 4, 6}) {
        const auto c = gen_iqp(n, 3 * n, 2.0, rng);
        auto computational = iqp_state(c, IqpBasis::computational);
        apply_hadamard_all(computational);
        const auto hadamard = iqp_state(c, IqpBasis::hadamard);
        CHECK(testutil::max_amplitude_diff(computational, hadamard) < 1e-10);
    }
}
