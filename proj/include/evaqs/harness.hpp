// harness.hpp
// Seeded study runner reproducing the simulation studies at desk scale, plus
// CSV input/output and percentile summaries.
//
// Reproducibility contract: (config, master seed) determines every circuit,
// noise draw and measurement shot. Per-cell streams are derived from the
// master seed by chained Rng::child tags (study kind, qubit count, infidelity
// index, circuit index), so results do not depend on the thread count, and
// rows are emitted in a fixed order.
//
// Cost columns are precision-normalized: the empirical cost is N * Var(F~)
// (plug-in variance from the run), and the predicted costs are
// 4 I (1 + chi^2) and 4 I d p_coll, i.e. the heuristic sample counts with the
// eps^-2 factor divided out.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "evaqs/cost.hpp"
#include "evaqs/iqp.hpp"
#include "evaqs/noise.hpp"
#include "evaqs/protocol.hpp"
#include "evaqs/random_circuit.hpp"
#include "evaqs/serialize.hpp"
#include "evaqs/supremacy.hpp"

namespace evaqs {

enum class StudyKind { iqp_hadamard, iqp_computational, random_circuit, supremacy };

inline std::string study_kind_name(StudyKind kind) {
    switch (kind) {
        case StudyKind::iqp_hadamard: return "iqp-hadamard";
        case StudyKind::iqp_computational: return "iqp-computational";
        case StudyKind::random_circuit: return "random";
        case StudyKind::supremacy: return "supremacy";
    }
    throw std::logic_error("unreachable");
}

inline StudyKind parse_study_kind(const std::string& name) {
    if (name == "iqp-hadamard") return StudyKind::iqp_hadamard;
    if (name == "iqp-computational") return StudyKind::iqp_computational;
    if (name == "random") return StudyKind::random_circuit;
    if (name == "supremacy") return StudyKind::supremacy;
    throw std::invalid_argument("unknown study kind: " + name);
}

struct StudyConfig {
    StudyKind kind = StudyKind::iqp_hadamard;
    std::vector<int> qubit_counts{4, 8, 12};
    int depth_factor = 3;  // circuit depth m = depth_factor * n
    std::vector<double> infidelities{0.03, 0.1, 0.3};
    int circuits_per_cell = 50;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 1;
    std::string output_path;  // empty: do not write a file
    int threads = 1;
    int supremacy_cycles = 16;
    double iqp_mean_weight = 2.0;  // mean qubits per rotation
};

/// Full study grids; the desk-scale defaults shrink the circuit counts while
/// keeping the shot count.
inline StudyConfig paper_scale_config(StudyKind kind) {
    StudyConfig cfg;
    cfg.kind = kind;
    cfg.infidelities = {0.01, 0.03, 0.1, 0.3};
    switch (kind) {
        case StudyKind::iqp_hadamard:
        case StudyKind::iqp_computational:
            cfg.qubit_counts = {4, 6, 8, 10, 12, 14, 16, 18, 20};
            cfg.circuits_per_cell = 400;
            break;
        case StudyKind::random_circuit:
            cfg.qubit_counts = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
            cfg.circuits_per_cell = 300;
            break;
        case StudyKind::supremacy:
            cfg.qubit_counts = {4, 9, 12, 16, 20};
            cfg.circuits_per_cell = 100;
            cfg.infidelities.clear();
            break;
    }
    return cfg;
}

inline constexpr int kStudyCsvSchemaVersion = 1;

struct StudyRow {
    int schema_version = kStudyCsvSchemaVersion;
    std::string study;
    int n = 0;
    int circuit_index = 0;
    std::uint64_t seed = 0;
    double target_infidelity = std::numeric_limits<double>::quiet_NaN();
    double true_infidelity = std::numeric_limits<double>::quiet_NaN();
    double est_infidelity_simple = std::numeric_limits<double>::quiet_NaN();
    double est_infidelity_corrected = std::numeric_limits<double>::quiet_NaN();
    double var_predicted = std::numeric_limits<double>::quiet_NaN();
    double cost_empirical = std::numeric_limits<double>::quiet_NaN();
    double cost_predicted_chi2 = std::numeric_limits<double>::quiet_NaN();
    double cost_predicted_uniform = std::numeric_limits<double>::quiet_NaN();
    double p_coll = std::numeric_limits<double>::quiet_NaN();
    double chi_square = std::numeric_limits<double>::quiet_NaN();
    double renyi2 = std::numeric_limits<double>::quiet_NaN();
    std::string error;  // per-circuit failures are recorded, not fatal
};

inline AmplitudeOracle iqp_hadamard_oracle(const IqpCircuit& circuit, cdouble scale = 1.0) {
    return {[circuit, scale](std::uint64_t x) { return scale * iqp_amplitude_hadamard(circuit, x); },
            scale};
}

inline void write_study_csv(std::ostream& out, std::span<const StudyRow> rows);

namespace detail {

struct CellTask {
    int n = 0;
    std::optional<double> target_infidelity;
    int infidelity_index = 0;
    int circuit_index = 0;
};

inline StudyRow run_cell(const StudyConfig& cfg, const CellTask& task,
                         const GateNoise& supremacy_noise) {
    StudyRow row;
    row.study = study_kind_name(cfg.kind);
    row.n = task.n;
    row.circuit_index = task.circuit_index;
    row.target_infidelity = task.target_infidelity
                                ? *task.target_infidelity
                                : std::numeric_limits<double>::quiet_NaN();
    Rng rng = Rng(cfg.seed)
                  .child(static_cast<std::uint64_t>(cfg.kind))
                  .child(static_cast<std::uint64_t>(task.n))
                  .child(static_cast<std::uint64_t>(task.infidelity_index))
                  .child(static_cast<std::uint64_t>(task.circuit_index));
    row.seed = rng.seed();

    try {
        StateVector tau(1), mu(1);
        switch (cfg.kind) {
            case StudyKind::iqp_hadamard:
            case StudyKind::iqp_computational: {
                const IqpBasis basis = cfg.kind == StudyKind::iqp_hadamard
                                           ? IqpBasis::hadamard
                                           : IqpBasis::computational;
                const auto circuit =
                    gen_iqp(task.n, cfg.depth_factor * task.n, cfg.iqp_mean_weight, rng);
                tau = iqp_state(circuit, basis);
                auto pert = perturb_iqp(circuit, *task.target_infidelity, basis, rng);
                mu = std::move(pert.mu);
                row.true_infidelity = pert.achieved_infidelity;
                break;
            }
            case StudyKind::random_circuit: {
                const auto circuit = gen_random_circuit(task.n, cfg.depth_factor * task.n, rng);
                tau = simulate_random_circuit(circuit);
                auto noisy = apply_output_noise(tau, *task.target_infidelity, rng);
                mu = std::move(noisy.mu);
                row.true_infidelity = noisy.achieved_infidelity;
                break;
            }
            case StudyKind::supremacy: {
                const auto circuit = gen_supremacy_circuit(task.n, cfg.supremacy_cycles, rng);
                tau = simulate_supremacy(circuit);
                mu = perturb_supremacy(circuit, supremacy_noise, rng);
                row.true_infidelity = 1.0 - fidelity(mu, tau);
                break;
            }
        }

        const auto report = concentration_report(tau);
        row.p_coll = report.p_coll;
        row.renyi2 = report.renyi2;
        const auto uniform = uniform_distribution(tau.dim());
        row.chi_square = chi_square(tau.probabilities(), uniform).value;

        const auto estimate = run_verification(mu, tau, cfg.shots, rng);
        if (estimate.insufficient_data) {
            row.error = "insufficient data: every Bell outcome was 0";
            return row;
        }
        row.est_infidelity_simple = 1.0 - estimate.f_simple;
        row.est_infidelity_corrected = 1.0 - estimate.f_corrected;
        row.cost_empirical = static_cast<double>(cfg.shots) * estimate.variance_estimate;

        const auto dec = decompose_error(mu, tau);
        row.var_predicted = variance_small_infidelity(tau, dec.sigma, row.true_infidelity,
                                                      uniform, static_cast<double>(cfg.shots));
        row.cost_predicted_chi2 = 4.0 * row.true_infidelity * (1.0 + row.chi_square);
        row.cost_predicted_uniform =
            4.0 * row.true_infidelity * static_cast<double>(tau.dim()) * row.p_coll;
    } catch (const std::exception& e) {
        std::string what = e.what();
        for (char& c : what)
            if (c == ',' || c == '\n') c = ';';
        row.error = what;
    }
    return row;
}

}  // namespace detail

/// Run every (n, infidelity, circuit) cell of the study. Cells are
/// independent and distributed over a worker pool; output order is fixed by
/// the task list, not the schedule.
inline std::vector<StudyRow> run_study(const StudyConfig& cfg) {
    if (cfg.circuits_per_cell < 1 || cfg.shots < 2)
        throw std::invalid_argument("need at least 1 circuit per cell and 2 shots");
    std::vector<detail::CellTask> tasks;
    const bool has_infidelity_axis = cfg.kind != StudyKind::supremacy;
    for (int n : cfg.qubit_counts) {
        const int n_infid = has_infidelity_axis ? static_cast<int>(cfg.infidelities.size()) : 1;
        for (int i = 0; i < n_infid; ++i)
            for (int c = 0; c < cfg.circuits_per_cell; ++c) {
                detail::CellTask task;
                task.n = n;
                if (has_infidelity_axis) task.target_infidelity = cfg.infidelities[i];
                task.infidelity_index = i;
                task.circuit_index = c;
                tasks.push_back(task);
            }
    }

    GateNoise supremacy_noise;
    if (cfg.kind == StudyKind::supremacy) {
        Rng calib = Rng(cfg.seed).child(0x6e6f697365ULL);  // dedicated calibration stream
        supremacy_noise = calibrate_gate_noise(calib);
    }

    std::vector<StudyRow> rows(tasks.size());
    const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(tasks.size())));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            rows[i] = detail::run_cell(cfg, tasks[i], supremacy_noise);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    rows[i] = detail::run_cell(cfg, tasks[i], supremacy_noise);
                }
            });
        for (auto& t : pool) t.join();
    }

    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) throw std::runtime_error("cannot open " + cfg.output_path + " for writing");
        write_study_csv(out, rows);
    }
    return rows;
}

// --- CSV ---

inline const char* study_csv_header() {
    return "schema_version,study,n,circuit,seed,target_infidelity,true_infidelity,"
           "est_infidelity_simple,est_infidelity_corrected,var_predicted,cost_empirical,"
           "cost_predicted_chi2,cost_predicted_uniform,p_coll,chi_square,renyi2,error";
}

inline void write_study_csv(std::ostream& out, std::span<const StudyRow> rows) {
    out << study_csv_header() << '\n';
    for (const auto& r : rows) {
        out << r.schema_version << ',' << r.study << ',' << r.n << ',' << r.circuit_index << ','
            << r.seed << ',' << detail::format_double(r.target_infidelity) << ','
            << detail::format_double(r.true_infidelity) << ','
            << detail::format_double(r.est_infidelity_simple) << ','
            << detail::format_double(r.est_infidelity_corrected) << ','
            << detail::format_double(r.var_predicted) << ','
            << detail::format_double(r.cost_empirical) << ','
            << detail::format_double(r.cost_predicted_chi2) << ','
            << detail::format_double(r.cost_predicted_uniform) << ','
            << detail::format_double(r.p_coll) << ','
            << detail::format_double(r.chi_square) << ','
            << detail::format_double(r.renyi2) << ',' << r.error << '\n';
    }
}

inline std::vector<StudyRow> read_study_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty study CSV");
    if (line != study_csv_header())
        throw std::invalid_argument("unrecognized study CSV header/schema");
    std::vector<StudyRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 17) throw std::invalid_argument("malformed study CSV row");
        StudyRow r;
        r.schema_version = std::stoi(fields[0]);
        r.study = fields[1];
        r.n = std::stoi(fields[2]);
        r.circuit_index = std::stoi(fields[3]);
        r.seed = std::stoull(fields[4]);
        r.target_infidelity = std::strtod(fields[5].c_str(), nullptr);
        r.true_infidelity = std::strtod(fields[6].c_str(), nullptr);
        r.est_infidelity_simple = std::strtod(fields[7].c_str(), nullptr);
        r.est_infidelity_corrected = std::strtod(fields[8].c_str(), nullptr);
        r.var_predicted = std::strtod(fields[9].c_str(), nullptr);
        r.cost_empirical = std::strtod(fields[10].c_str(), nullptr);
        r.cost_predicted_chi2 = std::strtod(fields[11].c_str(), nullptr);
        r.cost_predicted_uniform = std::strtod(fields[12].c_str(), nullptr);
        r.p_coll = std::strtod(fields[13].c_str(), nullptr);
        r.chi_square = std::strtod(fields[14].c_str(), nullptr);
        r.renyi2 = std::strtod(fields[15].c_str(), nullptr);
        r.error = fields[16];
        rows.push_back(std::move(r));
    }
    return rows;
}

// --- summaries ---

/// Percentile with linear interpolation between closest ranks:
/// h = (k-1) p/100 over the sorted values; the median of {1..100} is 50.5.
inline double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw std::invalid_argument("percentile of empty set");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

struct SummaryRow {
    std::string study;
    int n = 0;
    double target_infidelity = std::numeric_limits<double>::quiet_NaN();
    int count = 0;
    double est_infidelity_median = 0.0, est_infidelity_p10 = 0.0, est_infidelity_p90 = 0.0;
    double cost_median = 0.0, cost_p10 = 0.0, cost_p90 = 0.0;
};

/// Median and 10th/90th percentiles of the corrected infidelity estimate and
/// the empirical cost per (study, n, target infidelity) cell. Error rows are
/// skipped.
inline std::vector<SummaryRow> summarize(std::span<const StudyRow> rows) {
    std::map<std::tuple<std::string, int, std::string>,
             std::pair<std::vector<double>, std::vector<double>>>
        cells;
    for (const auto& r : rows) {
        if (!r.error.empty()) continue;
        auto& cell = cells[{r.study, r.n, detail::format_double(r.target_infidelity)}];
        cell.first.push_back(r.est_infidelity_corrected);
        cell.second.push_back(r.cost_empirical);
    }
    std::vector<SummaryRow> summary;
    summary.reserve(cells.size());
    for (const auto& [key, cell] : cells) {
        SummaryRow s;
        s.study = std::get<0>(key);
        s.n = std::get<1>(key);
        s.target_infidelity = std::strtod(std::get<2>(key).c_str(), nullptr);
        s.count = static_cast<int>(cell.first.size());
        s.est_infidelity_median = percentile(cell.first, 50.0);
        s.est_infidelity_p10 = percentile(cell.first, 10.0);
        s.est_infidelity_p90 = percentile(cell.first, 90.0);
        s.cost_median = percentile(cell.second, 50.0);
        s.cost_p10 = percentile(cell.second, 10.0);
        s.cost_p90 = percentile(cell.second, 90.0);
        summary.push_back(std::move(s));
    }
    return summary;
}

inline void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "study,n,target_infidelity,count,est_infidelity_median,est_infidelity_p10,"
           "est_infidelity_p90,cost_median,cost_p10,cost_p90\n";
    for (const auto& s : rows) {
        out << s.study << ',' << s.n << ',' << detail::format_double(s.target_infidelity) << ','
            << s.count << ',' << detail::format_double(s.est_infidelity_median) << ','
            << detail::format_double(s.est_infidelity_p10) << ','
            << detail::format_double(s.est_infidelity_p90) << ','
            << detail::format_double(s.cost_median) << ','
            << detail::format_double(s.cost_p10) << ','
            << detail::format_double(s.cost_p90) << '\n';
    }
}

}  // namespace evaqs
