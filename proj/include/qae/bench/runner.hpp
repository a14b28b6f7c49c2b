#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <thread>

#include "qae/bench/csv.hpp"
#include "qae/bench/plan.hpp"
#include "qae/estimators/bounds.hpp"

namespace qae::bench {

inline const std::vector<std::string> kSweepHeader = {
    "estimator",   "distribution",       "target_kind", "target_value",
    "grover_applications", "oracle_queries_a", "relative_error_pct",
    "ci_width",    "repetition",         "seed",        "error"};

struct SweepRow {
    std::string estimator;
    std::string distribution;
    std::string target_kind;
    double target_value = 0.0;
    std::uint64_t grover_applications = 0;
    std::uint64_t oracle_queries_a = 0;
    double relative_error_pct = 0.0;
    double ci_width = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::string error;

    std::vector<std::string> to_fields() const {
        return {estimator,
                distribution,
                target_kind,
                format_double(target_value),
                format_u64(grover_applications),
                format_u64(oracle_queries_a),
                format_double(relative_error_pct),
                format_double(ci_width),
                std::to_string(repetition),
                format_u64(seed),
                error};
    }

    /// Row key the per-row seed is derived from; reconstructable from the
    /// CSV fields alone so `replay` can re-derive any row.
    std::string key() const {
        return estimator + "|" + distribution + "|" + target_kind + "=" +
               format_double(target_value) + "|rep=" + std::to_string(repetition);
    }
};

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QAE_LAB_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 2;
}

// ---------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------

inline const std::vector<std::string> kBoundsHeader = {
    "alpha", "epsilon", "mlae_lower", "cp_upper", "iqae_upper", "fae_upper", "cmc_ref_sn1"};

/// Pure formula evaluation, one row per epsilon; no simulation, no seeds.
inline std::vector<std::vector<std::string>> bounds_rows(const Plan& plan) {
    auto eps_grid = plan.bounds_epsilons;
    std::sort(eps_grid.begin(), eps_grid.end());
    std::vector<std::vector<std::string>> rows;
    for (double eps : eps_grid) {
        const auto b = theoretical_bounds(plan.bounds_alpha, eps);
        rows.push_back({format_double(plan.bounds_alpha), format_double(eps),
                        format_double(b.mlae_lower()), format_double(b.cp_upper()),
                        format_double(b.iqae_upper()), format_double(b.fae_upper()),
                        format_double(b.cmc_ref(1.0))});
    }
    return rows;
}

inline std::filesystem::path run_bounds(const Plan& plan, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "bounds.csv";
    write_csv(path.string(), kBoundsHeader, bounds_rows(plan));
    return path;
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

namespace detail {

struct SweepTask {
    std::string estimator;
    std::size_t dist_index = 0;
    std::string target_kind;
    double target_value = 0.0;
    int repetition = 0;
};

/// Shared per-distribution context for mean-statistic sweep rows.
struct SweepContext {
    DistributionSpec spec;
    DiscretizedDistribution dd;
    double classical_mean = 0.0;
    std::shared_ptr<PowerOracle> oracle;  // mean-objective problem

    explicit SweepContext(const DistributionSpec& s)
        : spec(s), dd(discretize(s)), classical_mean(ClassicalStats(dd).mean()) {
        oracle = std::make_shared<PowerOracle>(
            AmplitudeProblem::from_distribution(dd, ObjectiveKind::mean()));
    }
};

inline SweepRow run_sweep_task(const Plan& plan, SweepContext& ctx, const SweepTask& task) {
    SweepRow row;
    row.estimator = task.estimator;
    row.distribution = ctx.spec.label();
    row.target_kind = task.target_kind;
    row.target_value = task.target_value;
    row.repetition = task.repetition;
    row.seed = row_seed(plan.master_seed, row.key());

    const auto kind = ObjectiveKind::mean();
    auto fill_from = [&](const EstimationResult& res) {
        row.grover_applications = res.grover_applications;
        row.oracle_queries_a = res.oracle_queries_a;
        const double value = to_value_domain(clamp01(res.a_hat), ctx.dd, kind);
        row.relative_error_pct =
            std::abs(value - ctx.classical_mean) / std::abs(ctx.classical_mean) * 100.0;
        row.ci_width = to_value_domain(clamp01(res.ci_hi), ctx.dd, kind) -
                       to_value_domain(clamp01(res.ci_lo), ctx.dd, kind);
        row.error = res.error;
    };

    try {
        if (task.estimator == "iqae") {
            IqaeConfig cfg = plan.iqae;
            cfg.epsilon = task.target_value;
            cfg.shots_per_round = plan.sweep.shots;
            cfg.seed = row.seed;
            fill_from(iqae(*ctx.oracle, cfg));
        } else if (task.estimator == "mlae") {
            MlaeConfig cfg;
            cfg.schedule = exponential_schedule(static_cast<int>(task.target_value));
            cfg.shots = plan.sweep.shots;
            cfg.alpha = plan.mlae_alpha;
            cfg.seed = row.seed;
            fill_from(mlae(*ctx.oracle, cfg));
        } else if (task.estimator == "fae") {
            FaeConfig cfg = plan.fae;
            cfg.max_iter = static_cast<int>(task.target_value);
            cfg.seed = row.seed;
            fill_from(fae(*ctx.oracle, cfg));
        } else if (task.estimator == "cmc") {
            CmcConfig cfg = plan.cmc;
            cfg.n_samples = static_cast<std::uint64_t>(task.target_value);
            cfg.seed = row.seed;
            const auto res = cmc(ctx.dd, Statistic::mean, cfg);
            // classical draws are the baseline's oracle unit; both query
            // columns carry the sample count so either axis includes it
            row.grover_applications = res.n_samples;
            row.oracle_queries_a = res.n_samples;
            row.relative_error_pct = std::abs(res.estimate - ctx.classical_mean) /
                                     std::abs(ctx.classical_mean) * 100.0;
            row.ci_width = res.ci_hi - res.ci_lo;
        } else {
            row.error = "unknown_estimator";
        }
    } catch (const std::exception& ex) {
        row.error = std::string("exception: ") + ex.what();
    }
    return row;
}

inline std::vector<SweepTask> sweep_tasks(const Plan& plan) {
    std::vector<SweepTask> tasks;
    for (const auto& estimator : plan.sweep.estimators) {
        std::vector<std::pair<std::string, double>> targets;
        if (estimator == "iqae") {
            for (double e : plan.sweep.iqae_epsilons) targets.emplace_back("epsilon", e);
        } else if (estimator == "mlae") {
            for (int d : plan.sweep.mlae_depths) {
                targets.emplace_back("depth", static_cast<double>(d));
            }
        } else if (estimator == "fae") {
            for (int it : plan.sweep.fae_iters) {
                targets.emplace_back("max_iter", static_cast<double>(it));
            }
        } else if (estimator == "cmc") {
            for (std::uint64_t n : plan.sweep.cmc_samples) {
                targets.emplace_back("samples", static_cast<double>(n));
            }
        } else {
            targets.emplace_back("unknown", 0.0);
        }
        for (std::size_t d = 0; d < plan.distributions.size(); ++d) {
            for (const auto& [kind, value] : targets) {
                for (int rep = 0; rep < plan.repetitions; ++rep) {
                    tasks.push_back({estimator, d, kind, value, rep});
                }
            }
        }
    }
    return tasks;
}

}  // namespace detail

/// Runs the error-versus-queries sweep for the mean statistic. Rows are
/// computed concurrently (each with its derived seed), then sorted by
/// (estimator, distribution, target, repetition) so worker count and
/// scheduling never change the output bytes. Failed rows carry an error
/// tag instead of aborting the sweep.
inline std::vector<SweepRow> run_sweep(const Plan& plan) {
    auto tasks = detail::sweep_tasks(plan);
    std::vector<std::unique_ptr<detail::SweepContext>> contexts;
    for (const auto& spec : plan.distributions) {
        contexts.push_back(std::make_unique<detail::SweepContext>(spec));
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    const int n_workers =
        std::max(1, std::min<int>(resolve_workers(plan.workers),
                                  static_cast<int>(tasks.size())));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            rows[i] = detail::run_sweep_task(plan, *contexts[tasks[i].dist_index], tasks[i]);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.estimator, a.distribution, a.target_value, a.repetition) <
               std::tie(b.estimator, b.distribution, b.target_value, b.repetition);
    });
    return rows;
}

inline std::filesystem::path write_sweep_csv(const std::vector<SweepRow>& rows,
                                             const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::vector<std::string>> fields;
    fields.reserve(rows.size());
    for (const auto& r : rows) fields.push_back(r.to_fields());
    const auto path = out_dir / "sweep.csv";
    write_csv(path.string(), kSweepHeader, fields);
    return path;
}

/// Recomputes one data row of a sweep CSV (1-based index over data rows)
/// from the plan and the row's own coordinates. Returns the recomputed
/// line and whether it matches the file byte for byte.
struct ReplayOutcome {
    std::string file_line;
    std::string replayed_line;
    bool matches = false;
};

inline ReplayOutcome replay_row(const Plan& plan, const std::string& csv_path,
                                std::size_t row_number) {
    const auto table = read_csv(csv_path);
    if (table.empty() || table[0] != kSweepHeader) {
        throw std::runtime_error("replay: unrecognized CSV schema");
    }
    if (row_number < 1 || row_number >= table.size()) {
        throw std::runtime_error("replay: row number out of range");
    }
    const auto& fields = table[row_number];
    if (fields.size() != kSweepHeader.size()) {
        throw std::runtime_error("replay: malformed row");
    }

    detail::SweepTask task;
    task.estimator = fields[0];
    task.target_kind = fields[2];
    task.target_value = std::stod(fields[3]);
    task.repetition = std::stoi(fields[8]);
    const std::string dist_label = fields[1];
    detail::SweepContext ctx(plan.find_distribution(dist_label));

    const SweepRow row = detail::run_sweep_task(plan, ctx, task);
    ReplayOutcome out;
    out.file_line = join_row(fields);
    out.replayed_line = join_row(row.to_fields());
    out.matches = out.file_line == out.replayed_line;
    return out;
}

// ---------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------

namespace detail {

inline std::unique_ptr<Estimator> make_estimator(const Plan& plan, const std::string& name) {
    if (name == "iqae") return std::make_unique<IqaeEstimator>(plan.iqae);
    if (name == "mlae") {
        MlaeConfig cfg;
        cfg.schedule = plan.mlae_schedule;
        cfg.shots = plan.mlae_shots;
        cfg.alpha = plan.mlae_alpha;
        return std::make_unique<MlaeEstimator>(cfg);
    }
    if (name == "fae") return std::make_unique<FaeEstimator>(plan.fae);
    if (name == "exact") return std::make_unique<ExactEstimator>();
    throw std::invalid_argument("unknown table estimator '" + name + "'");
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace detail

/// Per distribution x estimator x statistic summary mirroring the
/// headline comparison tables: averaged estimates, achieved levels, the
/// continuous reference at the achieved level, relative deviations, and
/// both query counters, with every per-repetition seed recorded.
inline json run_tables(const Plan& plan) {
    json out;
    out["settings"] = plan_to_json(plan);
    out["results"] = json::array();

    for (const auto& spec : plan.distributions) {
        const auto dd = discretize(spec);
        ClassicalStats stats(dd);
        json dist_json;
        dist_json["distribution"] = spec.label();
        dist_json["classical"] = {{"mean", stats.mean()},
                                  {"var", stats.var(plan.level)},
                                  {"cvar", stats.cvar(plan.level)},
                                  {"var_level_pct",
                                   100.0 * stats.cdf_at(stats.var_index(plan.level))}};
        const auto cont = continuous_reference(spec, plan.level);
        dist_json["continuous"] = {{"mean", continuous_mean(spec)},
                                   {"var", cont.var},
                                   {"cvar", cont.cvar}};

        json estimators_json;
        for (const auto& est_name : plan.table_estimators) {
            const auto est = detail::make_estimator(plan, est_name);
            json est_json;
            for (const auto stat : plan.statistics) {
                const std::string cell_key = "tables|" + spec.label() + "|" + est_name +
                                             "|" + statistic_name(stat);
                const std::uint64_t base_seed = row_seed(plan.master_seed, cell_key);

                std::vector<double> estimates, levels, actual_for_level, deltas_pct;
                std::vector<std::uint64_t> queries_a, grover, seeds;
                std::uint64_t max_depth = 0;
                int flagged = 0;
                for (int rep = 0; rep < plan.repetitions; ++rep) {
                    const std::uint64_t seed = derive_seed(base_seed, rep);
                    seeds.push_back(seed);
                    RiskReport rep_out = [&]() {
                        switch (stat) {
                            case Statistic::mean:
                                return estimate_mean(spec, dd, *est, seed);
                            case Statistic::var:
                                return estimate_var(spec, dd, plan.level, *est, seed);
                            case Statistic::cvar:
                                return estimate_cvar(spec, dd, plan.level, *est, seed);
                        }
                        throw std::logic_error("unknown statistic");
                    }();
                    estimates.push_back(rep_out.estimate);
                    queries_a.push_back(rep_out.oracle_queries_a());
                    grover.push_back(rep_out.grover_applications());
                    max_depth = std::max(max_depth, rep_out.max_circuit_depth());
                    if (rep_out.level_ambiguous || rep_out.degenerate_tail) ++flagged;

                    if (stat == Statistic::mean) {
                        deltas_pct.push_back(std::abs(rep_out.estimate - stats.mean()) /
                                             std::abs(stats.mean()) * 100.0);
                    } else {
                        levels.push_back(rep_out.achieved_level);
                        const double level_used =
                            std::clamp(rep_out.achieved_level, 1e-9, 1.0 - 1e-9);
                        const auto actual = continuous_reference(spec, level_used);
                        const double ref =
                            stat == Statistic::var ? actual.var : actual.cvar;
                        actual_for_level.push_back(ref);
                        deltas_pct.push_back(std::abs(rep_out.estimate - ref) /
                                             std::abs(ref) * 100.0);
                    }
                }

                json cell;
                cell["repetitions"] = plan.repetitions;
                cell["base_seed"] = base_seed;
                cell["seeds"] = seeds;
                cell["estimates"] = estimates;
                cell["avg_estimate"] = detail::mean_of(estimates);
                cell["avg_delta_pct"] = detail::mean_of(deltas_pct);
                cell["avg_oracle_queries_a"] =
                    detail::mean_of(std::vector<double>(queries_a.begin(), queries_a.end()));
                cell["avg_grover_applications"] =
                    detail::mean_of(std::vector<double>(grover.begin(), grover.end()));
                cell["max_circuit_depth"] = max_depth;
                if (!levels.empty()) {
                    cell["avg_level_pct"] = 100.0 * detail::mean_of(levels);
                    cell["avg_actual_for_level"] = detail::mean_of(actual_for_level);
                }
                if (flagged > 0) cell["flagged_runs"] = flagged;
                est_json[statistic_name(stat)] = cell;
            }
            estimators_json[est_name] = est_json;
        }
        dist_json["estimators"] = estimators_json;
        out["results"].push_back(dist_json);
    }
    return out;
}

inline std::string tables_text_report(const json& tables) {
    std::string text;
    char line[256];
    for (const auto& dist : tables["results"]) {
        text += "== " + dist["distribution"].get<std::string>() + " ==\n";
        std::snprintf(line, sizeof line,
                      "  classical: mean %.6g  var %.6g (level %.2f%%)  cvar %.6g\n",
                      dist["classical"]["mean"].get<double>(),
                      dist["classical"]["var"].get<double>(),
                      dist["classical"]["var_level_pct"].get<double>(),
                      dist["classical"]["cvar"].get<double>());
        text += line;
        std::snprintf(line, sizeof line,
                      "  continuous: mean %.6g  var %.6g  cvar %.6g\n",
                      dist["continuous"]["mean"].get<double>(),
                      dist["continuous"]["var"].get<double>(),
                      dist["continuous"]["cvar"].get<double>());
        text += line;
        for (const auto& [est_name, cells] : dist["estimators"].items()) {
            for (const auto& [stat_name, cell] : cells.items()) {
                std::string extra;
                if (cell.contains("avg_level_pct")) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "  level %.2f%%  actual-for-level %.6g",
                                  cell["avg_level_pct"].get<double>(),
                                  cell["avg_actual_for_level"].get<double>());
                    extra = buf;
                }
                std::snprintf(line, sizeof line,
                              "  %-5s %-4s: est %.6g  delta %.4g%%  oracles %.4g  grover "
                              "%.4g  depth %llu%s\n",
                              est_name.c_str(), stat_name.c_str(),
                              cell["avg_estimate"].get<double>(),
                              cell["avg_delta_pct"].get<double>(),
                              cell["avg_oracle_queries_a"].get<double>(),
                              cell["avg_grover_applications"].get<double>(),
                              static_cast<unsigned long long>(
                                  cell["max_circuit_depth"].get<std::uint64_t>()),
                              extra.c_str());
                text += line;
            }
        }
        text += "\n";
    }
    return text;
}

inline std::filesystem::path run_tables_to_dir(const Plan& plan,
                                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const json tables = run_tables(plan);
    {
        std::ofstream out(out_dir / "tables.json", std::ios::binary);
        out << tables.dump(2) << "\n";
    }
    {
        std::ofstream out(out_dir / "tables.txt", std::ios::binary);
        out << tables_text_report(tables);
    }
    return out_dir / "tables.json";
}

}  // namespace qae::bench
