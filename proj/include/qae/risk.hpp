#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "qae/estimators/canonical.hpp"
#include "qae/estimators/cmc.hpp"
#include "qae/estimators/fae.hpp"
#include "qae/estimators/iqae.hpp"
#include "qae/estimators/mlae.hpp"

namespace qae {

/// Amplitude-estimation backend the risk pipelines are generic over.
class Estimator {
public:
    virtual ~Estimator() = default;
    virtual std::string name() const = 0;
    virtual EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const = 0;
};

/// Reads the amplitude straight off the statevector. Zero-width
/// interval, zero query cost; the ground-truth backend used to check the
/// pipelines against the classical references.
class ExactEstimator final : public Estimator {
public:
    std::string name() const override { return "exact"; }
    EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const override {
        EstimationResult res;
        res.algorithm = "exact";
        res.seed = seed;
        res.a_hat = res.ci_lo = res.ci_hi = oracle.amplitude();
        res.max_circuit_depth = oracle.power_metrics(0).depth;
        return res;
    }
};

class IqaeEstimator final : public Estimator {
public:
    explicit IqaeEstimator(IqaeConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "iqae"; }
    EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const override {
        IqaeConfig cfg = cfg_;
        cfg.seed = seed;
        return iqae(oracle, cfg);
    }

private:
    IqaeConfig cfg_;
};

class MlaeEstimator final : public Estimator {
public:
    explicit MlaeEstimator(MlaeConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "mlae"; }
    EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const override {
        MlaeConfig cfg = cfg_;
        cfg.seed = seed;
        return mlae(oracle, cfg);
    }

private:
    MlaeConfig cfg_;
};

class FaeEstimator final : public Estimator {
public:
    explicit FaeEstimator(FaeConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "fae"; }
    EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const override {
        FaeConfig cfg = cfg_;
        cfg.seed = seed;
        return fae(oracle, cfg);
    }

private:
    FaeConfig cfg_;
};

class CanonicalEstimator final : public Estimator {
public:
    CanonicalEstimator(int m, std::uint64_t shots) : m_(m), shots_(shots) {}
    std::string name() const override { return "canonical"; }
    EstimationResult estimate(PowerOracle& oracle, std::uint64_t seed) const override {
        return canonical_qae(oracle, m_, shots_, seed);
    }

private:
    int m_;
    std::uint64_t shots_;
};

struct RiskReport {
    Statistic statistic = Statistic::mean;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double achieved_level = std::numeric_limits<double>::quiet_NaN();
    double ci_lo = std::numeric_limits<double>::quiet_NaN();
    double ci_hi = std::numeric_limits<double>::quiet_NaN();
    std::size_t var_index = 0;
    bool level_ambiguous = false;
    bool degenerate_tail = false;
    double classical_reference = std::numeric_limits<double>::quiet_NaN();
    double continuous_reference = std::numeric_limits<double>::quiet_NaN();
    /// Every estimator run this report consumed: one per bisection probe
    /// for var, plus the final payload estimation for mean/cvar.
    std::vector<EstimationResult> estimations;
    std::uint64_t seed = 0;

    std::uint64_t oracle_queries_a() const {
        std::uint64_t total = 0;
        for (const auto& e : estimations) total += e.oracle_queries_a;
        return total;
    }
    std::uint64_t grover_applications() const {
        std::uint64_t total = 0;
        for (const auto& e : estimations) total += e.grover_applications;
        return total;
    }
    std::uint64_t max_circuit_depth() const {
        std::uint64_t depth = 0;
        for (const auto& e : estimations) depth = std::max(depth, e.max_circuit_depth);
        return depth;
    }
};

/// Mean in value units: one amplitude estimation of the mean objective,
/// mapped through the affine index-to-value rescale.
inline RiskReport estimate_mean(const DistributionSpec& spec,
                                const DiscretizedDistribution& dd, const Estimator& est,
                                std::uint64_t seed) {
    RiskReport report;
    report.statistic = Statistic::mean;
    report.seed = seed;
    PowerOracle oracle(AmplitudeProblem::from_distribution(dd, ObjectiveKind::mean()));
    auto res = est.estimate(oracle, seed);
    report.estimate = to_value_domain(res.a_hat, dd, ObjectiveKind::mean());
    report.ci_lo = to_value_domain(clamp01(res.ci_lo), dd, ObjectiveKind::mean());
    report.ci_hi = to_value_domain(clamp01(res.ci_hi), dd, ObjectiveKind::mean());
    report.classical_reference = ClassicalStats(dd).mean();
    report.continuous_reference = continuous_mean(spec);
    report.estimations.push_back(std::move(res));
    return report;
}

/// Value at risk by bisection over grid indices: each probe estimates the
/// tail probability P[X <= x_l] through the threshold objective, and the
/// report returns the smallest index whose *estimated* probability
/// reaches the level, together with that estimate as the achieved level.
/// A final probe whose confidence interval straddles the level is
/// flagged level-ambiguous.
inline RiskReport estimate_var(const DistributionSpec& spec,
                               const DiscretizedDistribution& dd, double level,
                               const Estimator& est, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("estimate_var: level must be in (0, 1)");
    }
    RiskReport report;
    report.statistic = Statistic::var;
    report.seed = seed;

    std::map<std::size_t, std::size_t> probe_at;  // grid index -> estimations slot
    std::uint64_t probe_counter = 0;
    auto probe = [&](std::size_t l) -> const EstimationResult& {
        if (auto it = probe_at.find(l); it != probe_at.end()) {
            return report.estimations[it->second];
        }
        PowerOracle oracle(
            AmplitudeProblem::from_distribution(dd, ObjectiveKind::cdf_threshold(l)));
        auto res = est.estimate(oracle, derive_seed(seed, probe_counter++));
        probe_at[l] = report.estimations.size();
        report.estimations.push_back(std::move(res));
        return report.estimations.back();
    };

    std::ptrdiff_t lo = -1;
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(dd.size()) - 1;
    while (hi - lo > 1) {
        const std::ptrdiff_t mid = lo + (hi - lo) / 2;
        if (probe(static_cast<std::size_t>(mid)).a_hat >= level) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const std::size_t answer = static_cast<std::size_t>(hi);
    const auto& final_probe = probe(answer);

    report.var_index = answer;
    report.estimate = dd.grid[answer];
    report.achieved_level = final_probe.a_hat;
    report.level_ambiguous = final_probe.ci_lo < level && level < final_probe.ci_hi;
    report.ci_lo = dd.grid[lo >= 0 ? static_cast<std::size_t>(lo) : 0];
    report.ci_hi = dd.grid[answer];
    ClassicalStats stats(dd);
    report.classical_reference = stats.var(level);
    report.continuous_reference = continuous_reference(spec, level).var;
    return report;
}

/// Conditional value at risk: fixes l_alpha and the tail probability via
/// estimate_var, then estimates the tail-weighted payload and combines
/// the two into E[X | X <= x_{l_alpha}] in value units.
inline RiskReport estimate_cvar(const DistributionSpec& spec,
                                const DiscretizedDistribution& dd, double level,
                                const Estimator& est, std::uint64_t seed) {
    RiskReport var_report = estimate_var(spec, dd, level, est, derive_seed(seed, 1));

    RiskReport report;
    report.statistic = Statistic::cvar;
    report.seed = seed;
    report.var_index = var_report.var_index;
    report.achieved_level = var_report.achieved_level;
    report.level_ambiguous = var_report.level_ambiguous;
    report.estimations = std::move(var_report.estimations);

    const double tail = report.achieved_level;
    if (!(tail > 1e-9)) {
        report.degenerate_tail = true;
        return report;
    }

    const auto kind = ObjectiveKind::cvar(report.var_index);
    PowerOracle oracle(AmplitudeProblem::from_distribution(dd, kind));
    auto res = est.estimate(oracle, derive_seed(seed, 2));
    report.estimate = to_value_domain(clamp01(res.a_hat), dd, kind, tail);
    report.ci_lo = to_value_domain(clamp01(res.ci_lo), dd, kind, tail);
    report.ci_hi = to_value_domain(clamp01(res.ci_hi), dd, kind, tail);
    report.estimations.push_back(std::move(res));

    ClassicalStats stats(dd);
    report.classical_reference = stats.cvar(level);
    report.continuous_reference = continuous_reference(spec, level).cvar;
    return report;
}

}  // namespace qae
