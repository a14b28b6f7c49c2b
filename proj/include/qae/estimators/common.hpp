#pragma once

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "qae/grover.hpp"

namespace qae {

/// One batch of shots taken at a fixed Grover power.
struct RoundLog {
    std::uint64_t k = 0;
    std::uint64_t shots = 0;
    std::uint64_t good = 0;
};

struct EstimationResult {
    std::string algorithm;
    double a_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    std::uint64_t oracle_queries_a = 0;
    std::uint64_t grover_applications = 0;
    std::uint64_t shots_total = 0;
    std::uint64_t rounds = 0;
    std::uint64_t max_k = 0;
    std::uint64_t max_circuit_depth = 0;
    std::uint64_t seed = 0;
    std::vector<RoundLog> rounds_log;
    std::string error;  // empty when the run completed normally

    bool ok() const { return error.empty(); }

    void finish_counts(const QueryTally& tally) {
        oracle_queries_a = tally.oracle_queries_a;
        grover_applications = tally.grover_applications;
        shots_total = tally.shots;
        rounds = rounds_log.size();
        max_k = 0;
        for (const auto& r : rounds_log) max_k = std::max(max_k, r.k);
    }
};

/// Exact two-sided Clopper-Pearson interval for a binomial proportion at
/// confidence 1 - alpha.
inline std::pair<double, double> clopper_pearson(std::uint64_t good, std::uint64_t shots,
                                                 double alpha) {
    using boost::math::binomial_distribution;
    const double lo = binomial_distribution<double>::find_lower_bound_on_p(
        static_cast<double>(shots), static_cast<double>(good), alpha / 2.0);
    const double hi = binomial_distribution<double>::find_upper_bound_on_p(
        static_cast<double>(shots), static_cast<double>(good), alpha / 2.0);
    return {lo, hi};
}

/// Standard normal quantile at probability p.
inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace qae
