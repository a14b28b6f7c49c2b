#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qae/estimators/common.hpp"

namespace qae {

/// Closed-form sample-complexity curves at confidence 1 - alpha and
/// target error epsilon. Logarithms are natural except the inner log2,
/// exactly as the formulas are usually typeset:
///
///   mlae_lower  sqrt(alpha (1-alpha)) / eps                (lower bound)
///   iqae_upper  (50/eps)  ln((2/alpha) log2(pi/(4 eps)))   (loose upper)
///   cp_upper    (0.8/eps) ln((2/alpha) log2(pi/(4 eps)))   (Clopper-Pearson)
///   fae_upper   (4.1e3/eps) ln((2/alpha) log2(2 pi/(3 eps)))
///   cmc_ref     z_c(alpha)^2 s_n^2 / eps^2                 (central limit)
///
/// z_c uses the conventional two-decimal table value (1.96 at alpha =
/// 0.05) so that spot checks against hand computations come out exact;
/// sampling code elsewhere uses the full-precision quantile.
struct TheoreticalBounds {
    double alpha = 0.05;
    double epsilon = 1e-3;

    double mlae_lower() const { return std::sqrt(alpha * (1.0 - alpha)) / epsilon; }

    double iqae_upper() const {
        return 50.0 / epsilon * std::log(2.0 / alpha * inner_log2(std::numbers::pi / (4.0 * epsilon)));
    }

    double cp_upper() const {
        return 0.8 / epsilon * std::log(2.0 / alpha * inner_log2(std::numbers::pi / (4.0 * epsilon)));
    }

    double fae_upper() const {
        return 4.1e3 / epsilon *
               std::log(2.0 / alpha * inner_log2(2.0 * std::numbers::pi / (3.0 * epsilon)));
    }

    double cmc_ref(double s_n = 1.0) const {
        const double z = z_critical(alpha);
        return z * z * s_n * s_n / (epsilon * epsilon);
    }

    /// Two-decimal normal critical value, e.g. 1.96 for alpha = 0.05.
    static double z_critical(double alpha) {
        return std::round(normal_quantile(1.0 - alpha / 2.0) * 100.0) / 100.0;
    }

private:
    static double inner_log2(double x) { return std::log2(x); }
};

inline TheoreticalBounds theoretical_bounds(double alpha, double epsilon) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("epsilon must be in (0, 0.5)");
    }
    return {alpha, epsilon};
}

}  // namespace qae
