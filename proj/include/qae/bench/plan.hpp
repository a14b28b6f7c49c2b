#pragma once

#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qae/estimators/cmc.hpp"
#include "qae/estimators/fae.hpp"
#include "qae/estimators/iqae.hpp"
#include "qae/estimators/mlae.hpp"
#include "qae/risk.hpp"

namespace qae::bench {

using nlohmann::json;

/// FNV-1a hash of a row key string; combined with the master seed via
/// derive_seed this is the documented per-row seed-splitting rule.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t row_seed(std::uint64_t master, const std::string& key) {
    return derive_seed(master, fnv1a64(key));
}

/// Knob grids for the error-versus-queries sweep (mean statistic).
struct SweepGrid {
    std::vector<std::string> estimators = {"iqae", "mlae", "fae", "cmc"};
    std::vector<double> iqae_epsilons = {3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<int> mlae_depths = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<int> fae_iters = {1, 2, 3, 4, 5};
    std::vector<std::uint64_t> cmc_samples = {100,   300,   1000,   3000,  10000,
                                              30000, 100000, 200000};
    /// Shots per round for the iqae/mlae sweep points; smaller batches
    /// than the table runs keep the coarse-accuracy end cheap.
    std::uint64_t shots = 32;
};

struct Plan {
    std::uint64_t master_seed = 20240601;
    int repetitions = 10;
    int workers = 0;  // 0 = hardware concurrency
    double level = 0.95;

    std::vector<DistributionSpec> distributions = {
        DistributionSpec::normal(0.1, 0.01, 4),
        DistributionSpec::normal(0.1, 0.05, 4),
        DistributionSpec::weibull(1.8, 4),
        DistributionSpec::uniform(0.0, 1.0, 4),
    };
    std::vector<Statistic> statistics = {Statistic::mean, Statistic::var, Statistic::cvar};
    std::vector<std::string> table_estimators = {"iqae", "mlae", "fae"};

    IqaeConfig iqae;                      // epsilon 1e-3, alpha 0.05, shots 100
    std::vector<std::uint64_t> mlae_schedule = {0, 1, 2, 4};
    std::uint64_t mlae_shots = 100;
    double mlae_alpha = 0.05;
    FaeConfig fae;                        // delta 0.05, max_iter 3, auto shots
    CmcConfig cmc;                        // 1e5 samples, alpha 0.05

    SweepGrid sweep;

    double bounds_alpha = 0.05;
    std::vector<double> bounds_epsilons = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3,
                                           2e-3, 1e-3, 5e-4, 2e-4, 1e-4};

    DistributionSpec find_distribution(const std::string& label) const {
        for (const auto& d : distributions) {
            if (d.label() == label) return d;
        }
        throw std::invalid_argument("plan has no distribution labeled '" + label + "'");
    }
};

inline json distribution_to_json(const DistributionSpec& spec) {
    json j;
    if (const auto* n = std::get_if<NormalSpec>(&spec.kind)) {
        j["kind"] = "normal";
        j["mu"] = n->mu;
        j["sigma"] = n->sigma;
    } else if (const auto* w = std::get_if<WeibullSpec>(&spec.kind)) {
        j["kind"] = "weibull";
        j["shape"] = w->shape;
    } else {
        const auto& u = std::get<UniformSpec>(spec.kind);
        j["kind"] = "uniform";
        j["a"] = u.a;
        j["b"] = u.b;
    }
    j["qubits"] = spec.n_qubits;
    if (spec.bounds) j["bounds"] = {spec.bounds->first, spec.bounds->second};
    return j;
}

inline DistributionSpec distribution_from_json(const json& j) {
    const std::string kind = j.at("kind");
    const int qubits = j.value("qubits", 4);
    DistributionSpec spec = [&]() {
        if (kind == "normal") {
            return DistributionSpec::normal(j.at("mu"), j.at("sigma"), qubits);
        }
        if (kind == "weibull") return DistributionSpec::weibull(j.at("shape"), qubits);
        if (kind == "uniform") return DistributionSpec::uniform(j.at("a"), j.at("b"), qubits);
        throw std::invalid_argument("unknown distribution kind '" + kind + "'");
    }();
    if (j.contains("bounds")) {
        spec = spec.with_bounds(j["bounds"].at(0), j["bounds"].at(1));
    }
    return spec;
}

inline Statistic statistic_from_string(const std::string& s) {
    if (s == "mean") return Statistic::mean;
    if (s == "var") return Statistic::var;
    if (s == "cvar") return Statistic::cvar;
    throw std::invalid_argument("unknown statistic '" + s + "'");
}

inline json plan_to_json(const Plan& p) {
    json j;
    j["seed"] = p.master_seed;
    j["repetitions"] = p.repetitions;
    j["workers"] = p.workers;
    j["level"] = p.level;
    j["distributions"] = json::array();
    for (const auto& d : p.distributions) j["distributions"].push_back(distribution_to_json(d));
    j["statistics"] = json::array();
    for (auto s : p.statistics) j["statistics"].push_back(statistic_name(s));
    j["table_estimators"] = p.table_estimators;
    j["estimators"] = {
        {"iqae",
         {{"epsilon", p.iqae.epsilon},
          {"alpha", p.iqae.alpha},
          {"shots", p.iqae.shots_per_round},
          {"max_oracle_queries", p.iqae.max_oracle_queries}}},
        {"mlae",
         {{"schedule", p.mlae_schedule}, {"shots", p.mlae_shots}, {"alpha", p.mlae_alpha}}},
        {"fae",
         {{"delta", p.fae.delta},
          {"max_iter", p.fae.max_iter},
          {"shots", p.fae.shots_per_round}}},
        {"cmc", {{"samples", p.cmc.n_samples}, {"alpha", p.cmc.alpha}}},
    };
    j["sweep"] = {{"estimators", p.sweep.estimators},
                  {"iqae_epsilons", p.sweep.iqae_epsilons},
                  {"mlae_depths", p.sweep.mlae_depths},
                  {"fae_iters", p.sweep.fae_iters},
                  {"cmc_samples", p.sweep.cmc_samples},
                  {"shots", p.sweep.shots}};
    j["bounds"] = {{"alpha", p.bounds_alpha}, {"epsilons", p.bounds_epsilons}};
    return j;
}

/// Missing fields keep their defaults, so a plan file only has to name
/// what it overrides.
inline Plan plan_from_json(const json& j) {
    Plan p;
    p.master_seed = j.value("seed", p.master_seed);
    p.repetitions = j.value("repetitions", p.repetitions);
    p.workers = j.value("workers", p.workers);
    p.level = j.value("level", p.level);
    if (p.repetitions < 1) throw std::invalid_argument("plan: repetitions must be >= 1");
    if (!(p.level > 0.0 && p.level < 1.0)) {
        throw std::invalid_argument("plan: level must be in (0, 1)");
    }

    if (j.contains("distributions")) {
        p.distributions.clear();
        for (const auto& d : j["distributions"]) {
            p.distributions.push_back(distribution_from_json(d));
        }
        if (p.distributions.empty()) throw std::invalid_argument("plan: no distributions");
    }
    if (j.contains("statistics")) {
        p.statistics.clear();
        for (const auto& s : j["statistics"]) {
            p.statistics.push_back(statistic_from_string(s));
        }
    }
    if (j.contains("table_estimators")) {
        p.table_estimators = j["table_estimators"].get<std::vector<std::string>>();
    }

    if (j.contains("estimators")) {
        const auto& e = j["estimators"];
        if (e.contains("iqae")) {
            const auto& q = e["iqae"];
            p.iqae.epsilon = q.value("epsilon", p.iqae.epsilon);
            p.iqae.alpha = q.value("alpha", p.iqae.alpha);
            p.iqae.shots_per_round = q.value("shots", p.iqae.shots_per_round);
            p.iqae.max_oracle_queries =
                q.value("max_oracle_queries", p.iqae.max_oracle_queries);
        }
        if (e.contains("mlae")) {
            const auto& q = e["mlae"];
            if (q.contains("schedule")) {
                p.mlae_schedule = q["schedule"].get<std::vector<std::uint64_t>>();
            } else if (q.contains("schedule_length")) {
                p.mlae_schedule = exponential_schedule(q["schedule_length"]);
            }
            p.mlae_shots = q.value("shots", p.mlae_shots);
            p.mlae_alpha = q.value("alpha", p.mlae_alpha);
        }
        if (e.contains("fae")) {
            const auto& q = e["fae"];
            p.fae.delta = q.value("delta", p.fae.delta);
            p.fae.max_iter = q.value("max_iter", p.fae.max_iter);
            p.fae.shots_per_round = q.value("shots", p.fae.shots_per_round);
        }
        if (e.contains("cmc")) {
            const auto& q = e["cmc"];
            p.cmc.n_samples = q.value("samples", p.cmc.n_samples);
            p.cmc.alpha = q.value("alpha", p.cmc.alpha);
        }
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (s.contains("estimators")) {
            p.sweep.estimators = s["estimators"].get<std::vector<std::string>>();
        }
        if (s.contains("iqae_epsilons")) {
            p.sweep.iqae_epsilons = s["iqae_epsilons"].get<std::vector<double>>();
        }
        if (s.contains("mlae_depths")) {
            p.sweep.mlae_depths = s["mlae_depths"].get<std::vector<int>>();
        }
        if (s.contains("fae_iters")) {
            p.sweep.fae_iters = s["fae_iters"].get<std::vector<int>>();
        }
        if (s.contains("cmc_samples")) {
            p.sweep.cmc_samples = s["cmc_samples"].get<std::vector<std::uint64_t>>();
        }
        p.sweep.shots = s.value("shots", p.sweep.shots);
    }

    if (j.contains("bounds")) {
        p.bounds_alpha = j["bounds"].value("alpha", p.bounds_alpha);
        if (j["bounds"].contains("epsilons")) {
            p.bounds_epsilons = j["bounds"]["epsilons"].get<std::vector<double>>();
        }
    }
    return p;
}

inline Plan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    return plan_from_json(json::parse(in));
}

}  // namespace qae::bench
