#include <doctest.h>

#include <sstream>

#include "evaqs/harness.hpp"
#include "test_util.hpp"

using namespace evaqs;

namespace {

StudyConfig tiny_config(StudyKind kind) {
    StudyConfig cfg;
    cfg.kind = kind;
    cfg.qubit_counts = {4};
    cfg.infidelities = {0.1};
    cfg.circuits_per_cell = 1;
    cfg.shots = 10000;
    cfg.seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("single-cell study lands within 5 predicted sigmas") {
    for (auto kind : {StudyKind::iqp_hadamard, StudyKind::iqp_computational,
                      StudyKind::random_circuit}) {
        const auto rows = run_study(tiny_config(kind));
        REQUIRE(rows.size() == 1);
        const auto& r = rows[0];
        REQUIRE(r.error.empty());
        CHECK(std::abs(r.true_infidelity - 0.1) < 1e-5);
        const double sigma = std::sqrt(r.var_predicted);
        CHECK(std::abs(r.est_infidelity_corrected - r.true_infidelity) < 5.0 * sigma);
    }
}

TEST_CASE("identical configs give byte-identical CSV, independent of threads") {
    auto cfg = tiny_config(StudyKind::iqp_computational);
    cfg.qubit_counts = {4, 6};
    cfg.circuits_per_cell = 3;
    cfg.shots = 2000;

    const auto render = [](const std::vector<StudyRow>& rows) {
        std::ostringstream out;
        write_study_csv(out, rows);
        return out.str();
    };
    const auto first = render(run_study(cfg));
    const auto second = render(run_study(cfg));
    CHECK(first == second);

    auto threaded = cfg;
    threaded.threads = 4;
    CHECK(render(run_study(threaded)) == first);
}

TEST_CASE("iqp-hadamard rows have d * p_coll = 1 up to n = 20") {
    auto cfg = tiny_config(StudyKind::iqp_hadamard);
    cfg.qubit_counts = {4, 12, 20};
    cfg.circuits_per_cell = 1;
    cfg.shots = 500;
    cfg.threads = 2;
    for (const auto& r : run_study(cfg)) {
        REQUIRE(r.error.empty());
        const double d = std::pow(2.0, r.n);
        CHECK(std::abs(d * r.p_coll - 1.0) < 1e-10);
    }
}

TEST_CASE("unwritable output paths are reported") {
    auto cfg = tiny_config(StudyKind::iqp_hadamard);
    cfg.shots = 100;
    cfg.output_path = "/nonexistent-dir/rows.csv";
    CHECK_THROWS_AS(run_study(cfg), std::runtime_error);
}

TEST_CASE("row-level cost predictions: chi2 rule equals uniform rule") {
    auto cfg = tiny_config(StudyKind::random_circuit);
    cfg.qubit_counts = {4, 6};
    cfg.circuits_per_cell = 3;
    cfg.shots = 500;
    for (const auto& r : run_study(cfg)) {
        REQUIRE(r.error.empty());
        CHECK(std::abs(r.cost_predicted_chi2 - r.cost_predicted_uniform) <
              1e-9 * std::max(1.0, r.cost_predicted_uniform));
    }
}

TEST_CASE("supremacy study rows carry measured infidelity") {
    StudyConfig cfg;
    cfg.kind = StudyKind::supremacy;
    cfg.qubit_counts = {4};
    cfg.circuits_per_cell = 2;
    cfg.shots = 4000;
    cfg.seed = 7;
    const auto rows = run_study(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        REQUIRE(r.error.empty());
        CHECK(std::isnan(r.target_infidelity));
        CHECK(r.true_infidelity > 0.0);
        CHECK(r.true_infidelity < 0.5);
    }
}

TEST_CASE("per-circuit failures are recorded as row errors, not thrown") {
    StudyConfig cfg;
    cfg.kind = StudyKind::supremacy;
    cfg.qubit_counts = {5};  // unsupported lattice size
    cfg.circuits_per_cell = 1;
    cfg.shots = 100;
    const auto rows = run_study(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].error.empty());
    CHECK(std::isnan(rows[0].est_infidelity_corrected));
}

TEST_CASE("study CSV round-trips") {
    auto cfg = tiny_config(StudyKind::iqp_hadamard);
    cfg.circuits_per_cell = 2;
    cfg.shots = 300;
    const auto rows = run_study(cfg);

    std::ostringstream out;
    write_study_csv(out, rows);
    std::istringstream in(out.str());
    const auto parsed = read_study_csv(in);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].study == rows[i].study);
        CHECK(parsed[i].n == rows[i].n);
        CHECK(parsed[i].seed == rows[i].seed);
        CHECK(parsed[i].true_infidelity == rows[i].true_infidelity);
        CHECK(parsed[i].cost_empirical == rows[i].cost_empirical);
        CHECK(parsed[i].error == rows[i].error);
    }

    std::istringstream bad("not,a,study,csv\n1,2,3\n");
    CHECK_THROWS_AS(read_study_csv(bad), std::invalid_argument);
}

TEST_CASE("percentiles interpolate linearly between closest ranks") {
    CHECK(percentile({7.0}, 50.0) == 7.0);
    CHECK(percentile({7.0}, 10.0) == 7.0);
    std::vector<double> ranks;
    for (int i = 1; i <= 100; ++i) ranks.push_back(i);
    CHECK(percentile(ranks, 50.0) == doctest::Approx(50.5).epsilon(1e-12));
    CHECK(percentile(ranks, 10.0) == doctest::Approx(10.9).epsilon(1e-12));
    CHECK(percentile(ranks, 90.0) == doctest::Approx(90.1).epsilon(1e-12));
}

TEST_CASE("summarize groups by (study, n, target infidelity)") {
    auto cfg = tiny_config(StudyKind::iqp_hadamard);
    cfg.qubit_counts = {4, 6};
    cfg.infidelities = {0.1, 0.3};
    cfg.circuits_per_cell = 4;
    cfg.shots = 1000;
    const auto rows = run_study(cfg);
    const auto summary = summarize(rows);
    REQUIRE(summary.size() == 4);
    for (const auto& s : summary) {
        CHECK(s.count == 4);
        CHECK(s.est_infidelity_p10 <= s.est_infidelity_median);
        CHECK(s.est_infidelity_median <= s.est_infidelity_p90);
    }

    // single-row cell: median = p10 = p90
    const auto single = summarize(std::vector<StudyRow>{rows[0]});
    REQUIRE(single.size() == 1);
    CHECK(single[0].est_infidelity_median == single[0].est_infidelity_p10);
    CHECK(single[0].est_infidelity_median == single[0].est_infidelity_p90);
}

TEST_CASE("hadamard-basis verification works with the O(depth) amplitude oracle") {
    Rng gen(404);
    const auto circuit = gen_iqp(8, 24, 2.0, gen);
    const auto tau = iqp_state(circuit, IqpBasis::hadamard);
    Rng noise_rng(405);
    const auto pert = perturb_iqp(circuit, 0.1, IqpBasis::hadamard, noise_rng);

    // estimator weights come from the closed-form amplitude oracle, not from
    // the simulated target statevector
    const auto oracle = iqp_hadamard_oracle(circuit);
    for (std::uint64_t x : {0ull, 7ull, 200ull})
        CHECK(std::abs(oracle.query(x) - tau[x]) < 1e-12);

    BasicTrialSampler sampler(pert.mu, tau, oracle);
    Rng draw(406);
    std::vector<TrialRecord> trials;
    for (int i = 0; i < 20000; ++i) trials.push_back(sampler.sample(draw));
    const auto est = estimate_bias_corrected(trials);
    CHECK(std::abs((1.0 - est.f_corrected) - 0.1) < 5.0 * std::sqrt(est.variance_estimate));
}

TEST_CASE("iqp-computational cost grows mildly from n=4 to n=20") {
    StudyConfig cfg;
    cfg.kind = StudyKind::iqp_computational;
    cfg.qubit_counts = {4, 20};
    cfg.infidelities = {0.1};
    cfg.circuits_per_cell = 12;
    cfg.shots = 10000;
    cfg.seed = 2024;
    cfg.threads = 2;
    const auto rows = run_study(cfg);
    std::vector<double> cost4, cost20;
    for (const auto& r : rows) {
        REQUIRE(r.error.empty());
        (r.n == 4 ? cost4 : cost20).push_back(r.cost_empirical);
    }
    const double growth = percentile(cost20, 50.0) / percentile(cost4, 50.0);
    // reported growth over this span is about 2.5x; allow x2 slack with the
    // reduced circuit count
    CHECK(growth > 1.25);
    CHECK(growth < 5.0);
}

TEST_CASE("paper-scale presets carry the full grids") {
    const auto iqp = paper_scale_config(StudyKind::iqp_hadamard);
    CHECK(iqp.qubit_counts.size() == 9);
    CHECK(iqp.circuits_per_cell == 400);
    CHECK(iqp.infidelities == std::vector<double>{0.01, 0.03, 0.1, 0.3});
    const auto sup = paper_scale_config(StudyKind::supremacy);
    CHECK(sup.qubit_counts == std::vector<int>{4, 9, 12, 16, 20});
    CHECK(sup.circuits_per_cell == 100);
    CHECK(sup.infidelities.empty());
}
