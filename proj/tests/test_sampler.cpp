#include <doctest.h>

#include "evaqs/sampler.hpp"
#include "test_util.hpp"

using namespace evaqs;

namespace {
const auto kMethods = {DiscreteSampler::Method::cumulative, DiscreteSampler::Method::alias};
}

TEST_CASE("a single nonzero weight is always drawn") {
    for (auto method : kMethods) {
        std::vector<double> w(16, 0.0);
        w[9] = 2.5;
        DiscreteSampler sampler(w, method);
        Rng rng(101);
        for (int i = 0; i < 1000; ++i) CHECK(sampler.sample(rng) == 9);
        CHECK(sampler.probability(9) == 1.0);
        CHECK(sampler.probability(3) == 0.0);
    }
}

TEST_CASE("two equal weights split evenly (5 sigma over 1e5 draws)") {
    for (auto method : kMethods) {
        std::vector<double> w{3.0, 3.0};
        DiscreteSampler sampler(w, method);
        Rng rng(103);
        const int n = 100000;
        int ones = 0;
        for (int i = 0; i < n; ++i) ones += static_cast<int>(sampler.sample(rng));
        const double sigma = std::sqrt(0.25 * n);
        CHECK(std::abs(ones - n / 2.0) < 5.0 * sigma);
    }
}

TEST_CASE("chi-square goodness of fit for weights (0.7, 0.2, 0.1)") {
    for (auto method : kMethods) {
        std::vector<double> w{0.7, 0.2, 0.1};
        DiscreteSampler sampler(w, method);
        Rng rng(107);
        const double n = 100000;
        std::vector<double> counts(3, 0.0);
        for (int i = 0; i < static_cast<int>(n); ++i) counts[sampler.sample(rng)] += 1.0;
        const auto gof = testutil::chi_square_gof(counts, w, n);
        CHECK(gof.dof == 2);
        CHECK(gof.statistic < testutil::chi_square_critical_001(gof.dof));
    }
}

TEST_CASE("invalid weight vectors are rejected") {
    CHECK_THROWS_AS(DiscreteSampler(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteSampler(std::vector<double>{0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteSampler(std::vector<double>{1.0, -0.1}), std::invalid_argument);
}

TEST_CASE("unnormalized weights are normalized") {
    std::vector<double> w{2.0, 6.0};
    DiscreteSampler sampler(w);
    CHECK(sampler.probability(0) == doctest::Approx(0.25));
    CHECK(sampler.probability(1) == doctest::Approx(0.75));
}

TEST_CASE("both backends pass goodness of fit on a ragged distribution") {
    Rng weight_rng(109);
    std::vector<double> w(64);
    for (auto& x : w) x = weight_rng.uniform() < 0.2 ? 0.0 : weight_rng.uniform();
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<double> probs(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) probs[i] = w[i] / total;

    for (auto method : kMethods) {
        DiscreteSampler sampler(w, method);
        Rng rng(113);
        const double n = 200000;
        std::vector<double> counts(w.size(), 0.0);
        for (int i = 0; i < static_cast<int>(n); ++i) counts[sampler.sample(rng)] += 1.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (probs[i] == 0.0) CHECK(counts[i] == 0.0);
        const auto gof = testutil::chi_square_gof(counts, probs, n);
        CHECK(gof.statistic < testutil::chi_square_critical_001(gof.dof));
    }
}

TEST_CASE("sampling from a state uses |amplitude|^2") {
    StateVector s(2);
    s[0] = {0.6, 0.0};
    s[3] = {0.0, 0.8};
    auto sampler = DiscreteSampler::from_state(s);
    CHECK(sampler.probability(0) == doctest::Approx(0.36));
    CHECK(sampler.probability(3) == doctest::Approx(0.64));
    CHECK(sampler.probability(1) == 0.0);
}
