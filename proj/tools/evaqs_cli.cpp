// Command-line front end: run verification studies, verify a single circuit,
// report concentration/cost predictions, summarize study CSVs, and generate
// serialized circuits. Every subcommand accepts --config <file> with flat
// key=value lines mirroring its flags; explicit flags override the file.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evaqs/cost.hpp"
#include "evaqs/harness.hpp"
#include "evaqs/noise.hpp"
#include "evaqs/protocol.hpp"
#include "evaqs/serialize.hpp"

using namespace evaqs;

namespace {

struct VerifyOptions {
    std::string circuit_path;
    std::string basis = "computational";
    double target_infidelity = 0.1;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 1;
    std::string sampler = "uniform";  // uniform | target
    std::string trials_csv;
};

struct TargetState {
    StateVector tau;
    StateVector mu;
    double true_infidelity = 0.0;
    // estimator-side amplitude access; the closed-form O(depth) formula for
    // hadamard-basis IQP targets, a table lookup otherwise
    AmplitudeOracle tau_oracle;
};

IqpBasis parse_basis(const std::string& name) {
    if (name == "computational") return IqpBasis::computational;
    if (name == "hadamard") return IqpBasis::hadamard;
    throw CLI::ValidationError("--basis must be computational or hadamard");
}

// Build (tau, mu) from a serialized circuit using its family's noise model.
TargetState prepare_states(const AnyCircuit& circuit, const VerifyOptions& opt, Rng& rng) {
    if (const auto* iqp = std::get_if<IqpCircuit>(&circuit)) {
        const auto basis = parse_basis(opt.basis);
        auto tau = iqp_state(*iqp, basis);
        auto pert = perturb_iqp(*iqp, opt.target_infidelity, basis, rng);
        auto oracle = basis == IqpBasis::hadamard ? iqp_hadamard_oracle(*iqp)
                                                  : oracle_from_state(tau);
        return {std::move(tau), std::move(pert.mu), pert.achieved_infidelity,
                std::move(oracle)};
    }
    if (const auto* random = std::get_if<RandomCircuit>(&circuit)) {
        auto tau = simulate_random_circuit(*random);
        auto noisy = apply_output_noise(tau, opt.target_infidelity, rng);
        auto oracle = oracle_from_state(tau);
        return {std::move(tau), std::move(noisy.mu), noisy.achieved_infidelity,
                std::move(oracle)};
    }
    const auto& supremacy = std::get<SupremacyCircuit>(circuit);
    auto tau = simulate_supremacy(supremacy);
    Rng calib = rng.child(0x6e6f697365ULL);
    const auto noise = calibrate_gate_noise(calib);
    auto mu = perturb_supremacy(supremacy, noise, rng);
    const double infid = 1.0 - fidelity(mu, tau);
    auto oracle = oracle_from_state(tau);
    return {std::move(tau), std::move(mu), infid, std::move(oracle)};
}

StateVector target_state_only(const AnyCircuit& circuit, const std::string& basis) {
    if (const auto* iqp = std::get_if<IqpCircuit>(&circuit))
        return iqp_state(*iqp, parse_basis(basis));
    if (const auto* random = std::get_if<RandomCircuit>(&circuit))
        return simulate_random_circuit(*random);
    return simulate_supremacy(std::get<SupremacyCircuit>(circuit));
}

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,y,b,weight\n";
    for (const auto& t : trials)
        out << t.x << ',' << t.y << ',' << t.b << ',' << detail::format_double(t.weight)
            << '\n';
}

int run_verify(const VerifyOptions& opt) {
    const auto circuit = load_circuit(opt.circuit_path);
    Rng rng(opt.seed);
    const auto states = prepare_states(circuit, opt, rng);

    std::vector<TrialRecord> trials;
    trials.reserve(opt.shots);
    if (opt.sampler == "uniform") {
        BasicTrialSampler sampler(states.mu, states.tau, states.tau_oracle);
        for (std::uint64_t i = 0; i < opt.shots; ++i) trials.push_back(sampler.sample(rng));
    } else if (opt.sampler == "target") {
        GeneralTrialSampler sampler(states.mu, states.tau, states.tau, states.tau_oracle,
                                    states.tau_oracle);
        for (std::uint64_t i = 0; i < opt.shots; ++i) trials.push_back(sampler.sample(rng));
    } else {
        throw CLI::ValidationError("--sampler must be uniform or target");
    }
    const auto result = estimate_bias_corrected(trials);
    if (!opt.trials_csv.empty()) write_trials_csv(opt.trials_csv, trials);

    if (result.insufficient_data) {
        std::cerr << "insufficient data: every Bell outcome was 0\n";
        return 2;
    }
    std::printf("true_infidelity        = %.9g\n", states.true_infidelity);
    std::printf("estimate_simple        = %.9g\n", 1.0 - result.f_simple);
    std::printf("estimate_corrected     = %.9g\n", 1.0 - result.f_corrected);
    std::printf("stddev_estimate        = %.9g\n", std::sqrt(result.variance_estimate));
    std::printf("shots                  = %llu\n",
                static_cast<unsigned long long>(result.n_trials));
    return 0;
}

int run_cost(const std::string& circuit_path, const std::string& basis, double infid,
             double precision) {
    const auto tau = target_state_only(load_circuit(circuit_path), basis);
    const auto report = concentration_report(tau);
    const auto chi2 = chi_square(tau.probabilities(), uniform_distribution(tau.dim()));
    std::printf("qubits                 = %d\n", tau.n_qubits());
    std::printf("p_coll                 = %.9g\n", report.p_coll);
    std::printf("effective_support      = %.9g\n", report.effective_support);
    std::printf("renyi2_bits            = %.9g\n", report.renyi2);
    std::printf("d_p_coll               = %.9g\n", report.d_p_coll);
    std::printf("chi2_vs_uniform        = %.9g\n", chi2.value);
    std::printf("predicted_shots_chi2   = %.9g\n",
                cost_chi2(infid, precision, tau.probabilities(),
                          uniform_distribution(tau.dim())));
    std::printf("predicted_shots_dpcoll = %.9g\n", cost_uniform(infid, precision, tau));
    return 0;
}

int run_summarize(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open " + in_path);
    const auto rows = read_study_csv(in);
    if (rows.empty()) throw std::runtime_error("study CSV has no rows");
    const auto summary = summarize(rows);
    if (out_path.empty()) {
        write_summary_csv(std::cout, summary);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        write_summary_csv(out, summary);
    }
    return 0;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Expand `--config <file>` into synthetic `--key=value` flags, one per flat
// key=value line, appended only for flags the command line did not already
// set (so explicit flags override the file).
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file " + config_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     " is not key=value: " + stripped);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statevector studies of snippet-based fidelity verification"};
    app.require_subcommand(1);

    const auto add_config_flag = [](CLI::App* sub) {
        sub->add_option("--config",
                        "flat key=value file mirroring the flags; flags override it");
    };

    // --- study ---
    StudyConfig study_cfg;
    std::string study_kind = "iqp-hadamard";
    bool paper_scale = false;
    auto* study = app.add_subcommand("study", "run a multi-circuit verification study");
    add_config_flag(study);
    study->add_option("kind", study_kind, "iqp-hadamard | iqp-computational | random | supremacy")
        ->required();
    study->add_option("--qubits", study_cfg.qubit_counts, "qubit counts (cells)")
        ->delimiter(',');
    study->add_option("--infidelity", study_cfg.infidelities, "target infidelities (cells)")
        ->delimiter(',');
    study->add_option("--circuits", study_cfg.circuits_per_cell, "circuit realizations per cell");
    study->add_option("--shots", study_cfg.shots, "measurements per circuit");
    study->add_option("--seed", study_cfg.seed, "master seed");
    study->add_option("--out", study_cfg.output_path, "output CSV path")->required();
    study->add_option("--threads", study_cfg.threads, "worker threads over circuits");
    study->add_option("--depth-factor", study_cfg.depth_factor, "circuit depth m = factor * n");
    study->add_option("--cycles", study_cfg.supremacy_cycles, "supremacy cycle count");
    study->add_flag("--paper-scale", paper_scale,
                    "use the full study grids (400/300/100 circuits per cell)");

    // --- verify ---
    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "verify one noisy state against a circuit file");
    add_config_flag(verify);
    verify->add_option("--circuit", verify_opt.circuit_path, "serialized circuit path")
        ->required();
    verify->add_option("--basis", verify_opt.basis, "iqp basis: computational | hadamard");
    verify->add_option("--infidelity", verify_opt.target_infidelity,
                       "target infidelity for the noise model");
    verify->add_option("--shots", verify_opt.shots, "number of protocol trials");
    verify->add_option("--seed", verify_opt.seed, "seed");
    verify->add_option("--sampler", verify_opt.sampler,
                       "auxiliary sampler: uniform (basic version) | target");
    verify->add_option("--trials-csv", verify_opt.trials_csv, "dump trial records (x,y,b,w')");

    // --- cost ---
    std::string cost_circuit, cost_basis = "computational";
    double cost_infid = 0.1, cost_precision = 0.01;
    auto* cost = app.add_subcommand("cost", "concentration and sample-cost report for a target");
    add_config_flag(cost);
    cost->add_option("--circuit", cost_circuit, "serialized circuit path")->required();
    cost->add_option("--basis", cost_basis, "iqp basis: computational | hadamard");
    cost->add_option("--infidelity", cost_infid, "assumed infidelity");
    cost->add_option("--precision", cost_precision, "desired estimate precision");

    // --- summarize ---
    std::string sum_in, sum_out;
    auto* sum = app.add_subcommand("summarize", "median/percentile table from a study CSV");
    add_config_flag(sum);
    sum->add_option("--in", sum_in, "study CSV path")->required();
    sum->add_option("--out", sum_out, "summary CSV path (default: stdout)");

    // --- gen ---
    std::string gen_family, gen_out;
    int gen_qubits = 4, gen_depth = 0, gen_cycles = 16;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate and serialize a random circuit");
    add_config_flag(gen);
    gen->add_option("family", gen_family, "iqp | random | supremacy")->required();
    gen->add_option("--qubits", gen_qubits, "qubit count");
    gen->add_option("--depth", gen_depth, "gate/rotation count (default 3n)");
    gen->add_option("--cycles", gen_cycles, "supremacy cycle count");
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", gen_out, "output path")->required();

    try {
        auto args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end());  // CLI11 parses a reversed vector
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (study->parsed()) {
            StudyConfig cfg = study_cfg;
            cfg.kind = parse_study_kind(study_kind);
            if (paper_scale) {
                auto full = paper_scale_config(cfg.kind);
                full.shots = cfg.shots;
                full.seed = cfg.seed;
                full.output_path = cfg.output_path;
                full.threads = cfg.threads;
                full.depth_factor = cfg.depth_factor;
                cfg = full;
            }
            const auto rows = run_study(cfg);
            int failures = 0;
            for (const auto& r : rows)
                if (!r.error.empty()) ++failures;
            std::fprintf(stderr, "wrote %zu rows to %s (%d failed circuits)\n", rows.size(),
                         cfg.output_path.c_str(), failures);
            return failures == static_cast<int>(rows.size()) ? 1 : 0;
        }
        if (verify->parsed()) return run_verify(verify_opt);
        if (cost->parsed()) return run_cost(cost_circuit, cost_basis, cost_infid, cost_precision);
        if (sum->parsed()) return run_summarize(sum_in, sum_out);
        if (gen->parsed()) {
            Rng rng(gen_seed);
            const int depth = gen_depth > 0 ? gen_depth : 3 * gen_qubits;
            AnyCircuit circuit;
            if (gen_family == "iqp")
                circuit = gen_iqp(gen_qubits, depth, 2.0, rng);
            else if (gen_family == "random")
                circuit = gen_random_circuit(gen_qubits, depth, rng);
            else if (gen_family == "supremacy")
                circuit = gen_supremacy_circuit(gen_qubits, gen_cycles, rng);
            else
                throw CLI::ValidationError("family must be iqp, random or supremacy");
            save_circuit(gen_out, circuit);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
