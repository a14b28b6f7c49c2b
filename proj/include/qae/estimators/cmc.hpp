#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qae/distributions.hpp"
#include "qae/estimators/common.hpp"

namespace qae {

enum class Statistic { mean, var, cvar };

inline const char* statistic_name(Statistic s) {
    switch (s) {
        case Statistic::mean: return "mean";
        case Statistic::var: return "var";
        case Statistic::cvar: return "cvar";
    }
    return "?";
}

struct CmcConfig {
    std::uint64_t n_samples = 100000;
    double alpha = 0.05;  // confidence 1 - alpha for the normal-approx interval
    double level = 0.95;  // var/cvar level
    std::uint64_t seed = 0;
};

struct CmcResult {
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Classical Monte Carlo baseline: i.i.d. draws from the discretized
/// distribution, plug-in statistic, central-limit-theorem interval with
/// the sample standard deviation. One draw costs one sample, the unit
/// all query comparisons use for this estimator.
inline CmcResult cmc(const DiscretizedDistribution& dd, Statistic stat,
                     const CmcConfig& cfg) {
    if (cfg.n_samples < 2) throw std::invalid_argument("cmc: need at least 2 samples");
    if (stat != Statistic::mean && !(cfg.level > 0.0 && cfg.level < 1.0)) {
        throw std::invalid_argument("cmc: level must be in (0, 1)");
    }

    std::vector<double> cdf(dd.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dd.size(); ++i) {
        acc += dd.probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(cfg.seed);
    std::vector<std::uint64_t> counts(dd.size(), 0);
    for (std::uint64_t s = 0; s < cfg.n_samples; ++s) ++counts[rng.discrete(cdf)];

    const double n = static_cast<double>(cfg.n_samples);
    const double z = normal_quantile(1.0 - cfg.alpha / 2.0);
    CmcResult out;
    out.n_samples = cfg.n_samples;
    out.seed = cfg.seed;

    if (stat == Statistic::mean) {
        double mean = 0.0;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            mean += static_cast<double>(counts[i]) * dd.grid[i];
        }
        mean /= n;
        double ss = 0.0;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            const double d = dd.grid[i] - mean;
            ss += static_cast<double>(counts[i]) * d * d;
        }
        const double s_n = std::sqrt(ss / (n - 1.0));
        out.estimate = mean;
        out.ci_lo = mean - z * s_n / std::sqrt(n);
        out.ci_hi = mean + z * s_n / std::sqrt(n);
        return out;
    }

    // Empirical cdf and the smallest grid value reaching the level.
    std::vector<double> ecdf(dd.size());
    double running = 0.0;
    for (std::size_t i = 0; i < dd.size(); ++i) {
        running += static_cast<double>(counts[i]);
        ecdf[i] = running / n;
    }
    auto index_at = [&](double level) {
        for (std::size_t i = 0; i < ecdf.size(); ++i) {
            if (ecdf[i] >= level) return i;
        }
        return ecdf.size() - 1;
    };
    const std::size_t l = index_at(cfg.level);

    if (stat == Statistic::var) {
        out.estimate = dd.grid[l];
        const double half = z * std::sqrt(cfg.level * (1.0 - cfg.level) / n);
        out.ci_lo = dd.grid[index_at(std::max(1e-12, cfg.level - half))];
        out.ci_hi = dd.grid[index_at(std::min(1.0 - 1e-12, cfg.level + half))];
        return out;
    }

    // cvar: tail mean of the samples at or below the estimated var index
    double tail_n = 0.0, tail_sum = 0.0;
    for (std::size_t i = 0; i <= l; ++i) {
        tail_n += static_cast<double>(counts[i]);
        tail_sum += static_cast<double>(counts[i]) * dd.grid[i];
    }
    const double tail_mean = tail_sum / tail_n;
    double tail_ss = 0.0;
    for (std::size_t i = 0; i <= l; ++i) {
        const double d = dd.grid[i] - tail_mean;
        tail_ss += static_cast<double>(counts[i]) * d * d;
    }
    const double tail_sd = tail_n > 1.0 ? std::sqrt(tail_ss / (tail_n - 1.0)) : 0.0;
    out.estimate = tail_mean;
    out.ci_lo = tail_mean - z * tail_sd / std::sqrt(tail_n);
    out.ci_hi = tail_mean + z * tail_sd / std::sqrt(tail_n);
    return out;
}

}  // namespace qae
