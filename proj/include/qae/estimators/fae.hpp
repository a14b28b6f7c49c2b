#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qae/estimators/common.hpp"
#include "qae/estimators/mlae.hpp"

namespace qae {

struct FaeConfig {
    double delta = 0.05;  // overall failure probability
    int max_iter = 3;     // fixed iteration count; caps the power at 2^max_iter
    /// Shots per measurement; 0 picks ceil(1944 ln(2/delta)), the
    /// Chernoff-sized batch from the fixed-schedule analysis.
    std::uint64_t shots_per_round = 0;
    std::uint64_t seed = 0;
};

namespace detail {

struct AngleInterval {
    double lo, hi;
};

/// All x in [a, b] with cos(x) inside [c_lo, c_hi], as a list of closed
/// intervals (adjacent pieces meeting at branch boundaries are merged).
inline std::vector<AngleInterval> solve_cos_in_range(double a, double b, double c_lo,
                                                     double c_hi) {
    constexpr double pi = std::numbers::pi;
    c_lo = std::clamp(c_lo, -1.0, 1.0);
    c_hi = std::clamp(c_hi, -1.0, 1.0);
    std::vector<AngleInterval> out;
    const long q0 = static_cast<long>(std::floor(a / pi));
    const long q1 = static_cast<long>(std::floor(b / pi));
    for (long q = q0; q <= q1; ++q) {
        // cos(q pi + t) = (-1)^q cos t for t in [0, pi]
        const bool even = (q % 2) == 0;
        const double lo_c = even ? c_lo : -c_hi;
        const double hi_c = even ? c_hi : -c_lo;
        const double t_lo = std::acos(std::clamp(hi_c, -1.0, 1.0));
        const double t_hi = std::acos(std::clamp(lo_c, -1.0, 1.0));
        const double x_lo = std::max(a, static_cast<double>(q) * pi + t_lo);
        const double x_hi = std::min(b, static_cast<double>(q) * pi + t_hi);
        if (x_lo > x_hi) continue;
        if (!out.empty() && x_lo <= out.back().hi + 1e-12) {
            out.back().hi = std::max(out.back().hi, x_hi);
        } else {
            out.push_back({x_lo, x_hi});
        }
    }
    return out;
}

/// Range of cos over [a, b]: endpoint values widened to +-1 wherever a
/// multiple of pi falls inside.
inline std::pair<double, double> cos_range(double a, double b) {
    constexpr double pi = std::numbers::pi;
    double lo = std::min(std::cos(a), std::cos(b));
    double hi = std::max(std::cos(a), std::cos(b));
    const long q0 = static_cast<long>(std::ceil(a / pi));
    const long q1 = static_cast<long>(std::floor(b / pi));
    for (long q = q0; q <= q1; ++q) {
        if ((q % 2) == 0) {
            hi = 1.0;
        } else {
            lo = -1.0;
        }
    }
    return {lo, hi};
}

}  // namespace detail

/// Fixed-iteration amplitude estimation.
///
/// Runs max_iter + 1 doubling rounds with Grover powers 0, 1, 2, 4, ...,
/// 2^{max_iter - 1}; round j measures c_j = cos((4 m_j + 2) theta) =
/// 1 - 2 P(good) to within a Chernoff-Hoeffding half-width. While the
/// scaled angle interval stays inside one cosine branch the arccos is
/// unambiguous and the interval just shrinks; once it straddles a branch
/// boundary the measurement admits two candidate subintervals, and a
/// second estimate at power m_j + 1 picks the candidate whose predicted
/// cosine is feasible (candidates whose cos((4 m_j + 6) theta) range
/// misses the second confidence interval are pruned). The returned point
/// estimate is the likelihood maximizer over all collected rounds
/// restricted to the final interval, so degenerate all-zero data yields
/// exactly theta = 0.
inline EstimationResult fae(PowerOracle& oracle, const FaeConfig& cfg) {
    constexpr double pi = std::numbers::pi;
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
        throw std::invalid_argument("fae: delta must be in (0, 1)");
    }
    if (cfg.max_iter < 1) throw std::invalid_argument("fae: max_iter must be >= 1");

    const std::uint64_t shots =
        cfg.shots_per_round > 0
            ? cfg.shots_per_round
            : static_cast<std::uint64_t>(std::ceil(1944.0 * std::log(2.0 / cfg.delta)));
    const int total_rounds = cfg.max_iter + 1;
    const double delta_round = cfg.delta / (2.0 * total_rounds);
    // |c_hat - c| = 2 |p_hat - p| <= sqrt(2 ln(2/delta_round) / shots)
    const double chernoff =
        std::sqrt(2.0 * std::log(2.0 / delta_round) / static_cast<double>(shots));

    EstimationResult res;
    res.algorithm = "fae";
    res.seed = cfg.seed;
    Rng rng(cfg.seed);
    QueryTally tally;

    double th_lo = 0.0;
    double th_hi = pi / 2.0;
    bool ambiguous_at_end = false;

    auto measure_c = [&](std::uint64_t m) {
        const std::uint64_t good = oracle.sample_good(m, shots, rng, tally);
        res.rounds_log.push_back({m, shots, good});
        const double p_hat = static_cast<double>(good) / static_cast<double>(shots);
        return 1.0 - 2.0 * p_hat;
    };

    for (int j = 0; j < total_rounds; ++j) {
        const std::uint64_t m = (j == 0) ? 0 : (std::uint64_t{1} << (j - 1));
        const double K = 4.0 * static_cast<double>(m) + 2.0;
        const double c_hat = measure_c(m);
        auto candidates = detail::solve_cos_in_range(K * th_lo, K * th_hi,
                                                     c_hat - chernoff, c_hat + chernoff);
        if (candidates.empty()) continue;  // confidence miss; keep the interval

        if (candidates.size() > 1) {
            // Disambiguate with one extra estimate at power m + 1.
            const double K2 = K + 4.0;
            const double c2_hat = measure_c(m + 1);
            std::vector<detail::AngleInterval> kept;
            for (const auto& cand : candidates) {
                const auto [r_lo, r_hi] =
                    detail::cos_range(K2 * cand.lo / K, K2 * cand.hi / K);
                if (r_hi >= c2_hat - chernoff - 1e-12 &&
                    r_lo <= c2_hat + chernoff + 1e-12) {
                    kept.push_back(cand);
                }
            }
            if (!kept.empty()) candidates = std::move(kept);
            ambiguous_at_end = candidates.size() > 1;
        } else {
            ambiguous_at_end = false;
        }

        double hull_lo = candidates.front().lo;
        double hull_hi = candidates.back().hi;
        th_lo = std::clamp(hull_lo / K, 0.0, pi / 2.0);
        th_hi = std::clamp(hull_hi / K, 0.0, pi / 2.0);
    }

    if (ambiguous_at_end) res.error = "ambiguity_unresolved";

    const double theta = th_hi > th_lo
                             ? detail::maximize_log_likelihood(res.rounds_log, th_lo, th_hi)
                             : th_lo;
    res.a_hat = std::sin(theta) * std::sin(theta);
    res.ci_lo = std::sin(th_lo) * std::sin(th_lo);
    res.ci_hi = std::sin(th_hi) * std::sin(th_hi);
    res.finish_counts(tally);
    res.max_circuit_depth = oracle.power_metrics(res.max_k).depth;
    return res;
}

}  // namespace qae
