#pragma once

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <span>

#include "qae/estimators/common.hpp"

namespace qae {

struct MlaeConfig {
    std::vector<std::uint64_t> schedule = {0, 1, 2, 4};  // Grover powers m_k
    std::uint64_t shots = 100;                           // N_k, same for every power
    double alpha = 0.05;                                 // for the Fisher interval
    std::uint64_t seed = 0;
};

/// Exponentially incremental power schedule {0, 1, 2, 4, ..., 2^{J-2}}.
inline std::vector<std::uint64_t> exponential_schedule(int length) {
    if (length < 1) throw std::invalid_argument("schedule length must be >= 1");
    std::vector<std::uint64_t> s{0};
    for (int j = 1; j < length; ++j) s.push_back(std::uint64_t{1} << (j - 1));
    return s;
}

namespace detail {

inline double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

/// Joint log-likelihood of the observed good counts:
///   L(theta) = sum_k [ g_k ln sin^2((2m_k+1) theta)
///            + (n_k - g_k) ln cos^2((2m_k+1) theta) ].
inline double log_likelihood(std::span<const RoundLog> rounds, double theta) {
    double ll = 0.0;
    for (const auto& r : rounds) {
        const double s = std::sin((2.0 * static_cast<double>(r.k) + 1.0) * theta);
        const double p = s * s;
        ll += static_cast<double>(r.good) * safe_log(p) +
              static_cast<double>(r.shots - r.good) * safe_log(1.0 - p);
    }
    return ll;
}

/// Global maximizer of the log-likelihood on [lo, hi]: a dense grid of at
/// least 10^4 (2 max_m + 1) points (so every oscillation of the deepest
/// term is sampled thousands of times), followed by Brent refinement in
/// the winning cell down to ~1e-12. Grid ties break toward the smaller
/// angle.
inline double maximize_log_likelihood(std::span<const RoundLog> rounds, double lo,
                                      double hi) {
    std::uint64_t max_m = 0;
    for (const auto& r : rounds) max_m = std::max(max_m, r.k);
    const std::size_t n_cells = 10000 * (2 * static_cast<std::size_t>(max_m) + 1);
    const double h = (hi - lo) / static_cast<double>(n_cells);

    // Per-term incremental rotation: sin/cos advance by angle K h per grid
    // step, re-seeded from libm periodically to stop drift.
    struct Term {
        double s, c, sh, ch, g, b;  // state, step, good, bad counts
        double K;
    };
    std::vector<Term> terms;
    terms.reserve(rounds.size());
    for (const auto& r : rounds) {
        const double K = 2.0 * static_cast<double>(r.k) + 1.0;
        terms.push_back({std::sin(K * lo), std::cos(K * lo), std::sin(K * h),
                         std::cos(K * h), static_cast<double>(r.good),
                         static_cast<double>(r.shots - r.good), K});
    }

    double best_ll = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i <= n_cells; ++i) {
        if ((i & 0xfff) == 0) {
            const double theta = lo + static_cast<double>(i) * h;
            for (auto& t : terms) {
                t.s = std::sin(t.K * theta);
                t.c = std::cos(t.K * theta);
            }
        }
        double ll = 0.0;
        for (auto& t : terms) {
            const double p = t.s * t.s;
            ll += t.g * safe_log(p) + t.b * safe_log(1.0 - p);
            const double s_next = t.s * t.ch + t.c * t.sh;
            t.c = t.c * t.ch - t.s * t.sh;
            t.s = s_next;
        }
        if (ll > best_ll) {
            best_ll = ll;
            best_i = i;
        }
    }

    const double theta_best = lo + static_cast<double>(best_i) * h;
    const double b_lo = std::max(lo, theta_best - h);
    const double b_hi = std::min(hi, theta_best + h);
    auto neg_ll = [&](double theta) { return -log_likelihood(rounds, theta); };
    const auto [theta_ref, neg_best] =
        boost::math::tools::brent_find_minima(neg_ll, b_lo, b_hi, 48);
    return (-neg_best >= best_ll) ? theta_ref : theta_best;
}

}  // namespace detail

/// Maximum-likelihood angle for a set of (power, shots, good) rounds on
/// [0, pi/2]. With no data at all the likelihood is flat and the
/// documented tie-break returns pi/4.
inline double mle_maximize(std::span<const RoundLog> rounds) {
    std::uint64_t total = 0;
    for (const auto& r : rounds) {
        if (r.good > r.shots) throw std::invalid_argument("mle: good > shots");
        total += r.shots;
    }
    if (total == 0) return std::numbers::pi / 4.0;
    return detail::maximize_log_likelihood(rounds, 0.0, std::numbers::pi / 2.0);
}

inline double mle_maximize(std::span<const std::uint64_t> schedule,
                           std::span<const std::uint64_t> shots,
                           std::span<const std::uint64_t> good) {
    if (schedule.size() != shots.size() || schedule.size() != good.size()) {
        throw std::invalid_argument("mle: inconsistent schedule/counts");
    }
    std::vector<RoundLog> rounds(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        rounds[i] = {schedule[i], shots[i], good[i]};
    }
    return mle_maximize(rounds);
}

/// Maximum-likelihood amplitude estimation: N_k shots at every scheduled
/// Grover power, joint likelihood maximized classically. The interval is
/// the observed-Fisher-information normal interval; per shot at power m
/// the information about theta is 4 (2m+1)^2, independent of theta.
inline EstimationResult mlae(PowerOracle& oracle, const MlaeConfig& cfg) {
    if (cfg.schedule.empty()) throw std::invalid_argument("mlae: empty schedule");
    for (std::size_t i = 1; i < cfg.schedule.size(); ++i) {
        if (cfg.schedule[i] < cfg.schedule[i - 1]) {
            throw std::invalid_argument("mlae: schedule must be nondecreasing");
        }
    }
    if (cfg.shots < 1) throw std::invalid_argument("mlae: shots must be >= 1");

    EstimationResult res;
    res.algorithm = "mlae";
    res.seed = cfg.seed;
    Rng rng(cfg.seed);
    QueryTally tally;
    double fisher = 0.0;
    for (std::uint64_t m : cfg.schedule) {
        const std::uint64_t good = oracle.sample_good(m, cfg.shots, rng, tally);
        res.rounds_log.push_back({m, cfg.shots, good});
        const double w = 2.0 * static_cast<double>(m) + 1.0;
        fisher += 4.0 * static_cast<double>(cfg.shots) * w * w;
    }

    const double theta = mle_maximize(res.rounds_log);
    const double s = std::sin(theta);
    res.a_hat = s * s;
    const double d_theta = normal_quantile(1.0 - cfg.alpha / 2.0) / std::sqrt(fisher);
    const double t_lo = std::max(0.0, theta - d_theta);
    const double t_hi = std::min(std::numbers::pi / 2.0, theta + d_theta);
    res.ci_lo = std::sin(t_lo) * std::sin(t_lo);
    res.ci_hi = std::sin(t_hi) * std::sin(t_hi);
    res.finish_counts(tally);
    res.max_circuit_depth = oracle.power_metrics(res.max_k).depth;
    return res;
}

}  // namespace qae
