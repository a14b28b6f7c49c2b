#pragma once

#include <cmath>
#include <numbers>

#include "qae/estimators/bounds.hpp"
#include "qae/estimators/common.hpp"

namespace qae {

struct IqaeConfig {
    double epsilon = 1e-3;  // target half-width of the amplitude interval
    double alpha = 0.05;    // 1 - confidence
    std::uint64_t shots_per_round = 100;
    /// Hard cap on A-applications; 0 means "use the loose theoretical
    /// upper bound evaluated at (alpha, epsilon)".
    std::uint64_t max_oracle_queries = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Largest k (with K = 4k+2 and K >= r * K_prev) for which the scaled
/// interval [K theta_lo, K theta_hi] sits inside a single cosine
/// half-plane modulo 2 pi. Returns the previous round's power when no
/// admissible K exists yet.
inline std::pair<std::uint64_t, bool> find_next_k(std::uint64_t k_prev, bool up_prev,
                                                  double th_lo, double th_hi,
                                                  double ratio = 2.0) {
    constexpr double pi = std::numbers::pi;
    constexpr double two_pi = 2.0 * pi;
    const double width = th_hi - th_lo;
    if (width <= 0.0) return {k_prev, up_prev};

    const double k_top = std::floor((pi / width - 2.0) / 4.0);
    if (k_top < 0.0) return {k_prev, up_prev};
    std::uint64_t k = std::min<std::uint64_t>(static_cast<std::uint64_t>(k_top),
                                              kMaxGroverPower);
    const double k_floor = ratio * (4.0 * static_cast<double>(k_prev) + 2.0);
    while (4.0 * static_cast<double>(k) + 2.0 >= k_floor) {
        const double K = 4.0 * static_cast<double>(k) + 2.0;
        const double lo = std::fmod(K * th_lo, two_pi);
        const double hi = lo + K * width;
        if (hi <= pi + 1e-12) return {k, true};
        if (lo >= pi - 1e-12 && hi <= two_pi + 1e-12) return {k, false};
        if (k == 0) break;
        --k;
    }
    return {k_prev, up_prev};
}

}  // namespace detail

/// Iterative amplitude estimation.
///
/// Keeps a confidence interval [theta_lo, theta_hi] for theta_a and in
/// each round amplifies with the deepest admissible Grover power, i.e.
/// the largest K = 4k+2 whose scaled interval still fits a cosine
/// half-plane, so each batch of shots reads the angle at K-fold leverage.
/// Shots taken at the same power pool into one Clopper-Pearson interval
/// at per-round level alpha/T with T = ceil(log2(pi/(8 epsilon))), and
/// the run stops once the interval is at most 2 epsilon wide in the
/// amplitude domain. a_hat is the interval midpoint, so coverage of the
/// interval implies |a_hat - a| <= epsilon.
inline EstimationResult iqae(PowerOracle& oracle, const IqaeConfig& cfg) {
    constexpr double pi = std::numbers::pi;
    constexpr double two_pi = 2.0 * pi;
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
        throw std::invalid_argument("iqae: epsilon must be in (0, 0.5)");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw std::invalid_argument("iqae: alpha must be in (0, 1)");
    }
    if (cfg.shots_per_round < 1) throw std::invalid_argument("iqae: shots must be >= 1");

    const int t_rounds = std::max(1, static_cast<int>(std::ceil(
                                          std::log2(pi / (8.0 * cfg.epsilon)))));
    const double alpha_round = cfg.alpha / t_rounds;
    const std::uint64_t budget =
        cfg.max_oracle_queries > 0
            ? cfg.max_oracle_queries
            : static_cast<std::uint64_t>(
                  std::ceil(theoretical_bounds(cfg.alpha, cfg.epsilon).iqae_upper()));

    EstimationResult res;
    res.algorithm = "iqae";
    res.seed = cfg.seed;
    Rng rng(cfg.seed);
    QueryTally tally;

    double th_lo = 0.0;
    double th_hi = pi / 2.0;
    std::uint64_t k = 0;
    bool up = true;
    std::uint64_t pooled_shots = 0;
    std::uint64_t pooled_good = 0;

    auto amplitude_width = [&]() {
        const double s_hi = std::sin(th_hi), s_lo = std::sin(th_lo);
        return s_hi * s_hi - s_lo * s_lo;
    };

    while (amplitude_width() > 2.0 * cfg.epsilon) {
        const auto [k_next, up_next] = detail::find_next_k(k, up, th_lo, th_hi);
        if (k_next != k) {
            k = k_next;
            up = up_next;
            pooled_shots = 0;
            pooled_good = 0;
        }
        if (tally.oracle_queries_a + cfg.shots_per_round * (2 * k + 1) > budget) {
            res.error = "budget_exhausted";
            break;
        }

        const std::uint64_t good = oracle.sample_good(k, cfg.shots_per_round, rng, tally);
        res.rounds_log.push_back({k, cfg.shots_per_round, good});
        pooled_shots += cfg.shots_per_round;
        pooled_good += good;

        const auto [a_lo, a_hi] = clopper_pearson(pooled_good, pooled_shots, alpha_round);
        const double K = 4.0 * static_cast<double>(k) + 2.0;
        const double u_lo = 1.0 - 2.0 * a_hi;  // cos(K theta) bounds
        const double u_hi = 1.0 - 2.0 * a_lo;
        double phi_lo, phi_hi;
        if (up) {
            phi_lo = std::acos(std::clamp(u_hi, -1.0, 1.0));
            phi_hi = std::acos(std::clamp(u_lo, -1.0, 1.0));
        } else {
            phi_lo = two_pi - std::acos(std::clamp(u_lo, -1.0, 1.0));
            phi_hi = two_pi - std::acos(std::clamp(u_hi, -1.0, 1.0));
        }
        const double cycle = std::floor(K * 0.5 * (th_lo + th_hi) / two_pi);
        const double new_lo = std::clamp((cycle * two_pi + phi_lo) / K, 0.0, pi / 2.0);
        const double new_hi = std::clamp((cycle * two_pi + phi_hi) / K, 0.0, pi / 2.0);
        const double cand_lo = std::max(th_lo, new_lo);
        const double cand_hi = std::min(th_hi, new_hi);
        if (cand_lo <= cand_hi) {
            th_lo = cand_lo;
            th_hi = cand_hi;
        } else {
            // conflicting evidence (a confidence miss); trust the pooled round
            th_lo = std::min(new_lo, new_hi);
            th_hi = std::max(new_lo, new_hi);
        }
    }

    const double s_lo = std::sin(th_lo), s_hi = std::sin(th_hi);
    res.ci_lo = s_lo * s_lo;
    res.ci_hi = s_hi * s_hi;
    res.a_hat = 0.5 * (res.ci_lo + res.ci_hi);
    res.finish_counts(tally);
    res.max_circuit_depth = oracle.power_metrics(res.max_k).depth;
    return res;
}

}  // namespace qae
