#pragma once

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qae/statevector.hpp"

namespace qae {

struct NormalSpec {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Weibull with shape beta; the scale is fixed to 1.
struct WeibullSpec {
    double shape = 1.0;
};

/// Uniform on the half-open interval [a, b).
struct UniformSpec {
    double a = 0.0;
    double b = 1.0;
};

struct DistributionSpec {
    std::variant<NormalSpec, WeibullSpec, UniformSpec> kind;
    int n_qubits = 4;
    /// Grid bounds in value units. Defaults: mu +- 3 sigma for the
    /// normal, [0, q_0.999] for the Weibull, [a, b) for the uniform.
    std::optional<std::pair<double, double>> bounds;

    static DistributionSpec normal(double mu, double sigma, int n_qubits = 4) {
        if (sigma <= 0) throw std::invalid_argument("normal: sigma must be > 0");
        return {NormalSpec{mu, sigma}, n_qubits, std::nullopt};
    }
    static DistributionSpec weibull(double shape, int n_qubits = 4) {
        if (shape <= 0) throw std::invalid_argument("weibull: shape must be > 0");
        return {WeibullSpec{shape}, n_qubits, std::nullopt};
    }
    static DistributionSpec uniform(double a, double b, int n_qubits = 4) {
        if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
        return {UniformSpec{a, b}, n_qubits, std::nullopt};
    }

    DistributionSpec with_bounds(double lo, double hi) const {
        if (!(lo < hi)) throw std::invalid_argument("bounds: need lo < hi");
        DistributionSpec s = *this;
        s.bounds = {lo, hi};
        return s;
    }

    DistributionSpec with_qubits(int n) const {
        DistributionSpec s = *this;
        s.n_qubits = n;
        return s;
    }

    std::pair<double, double> effective_bounds() const {
        if (bounds) return *bounds;
        if (const auto* n = std::get_if<NormalSpec>(&kind)) {
            return {n->mu - 3 * n->sigma, n->mu + 3 * n->sigma};
        }
        if (const auto* w = std::get_if<WeibullSpec>(&kind)) {
            return {0.0, std::pow(-std::log(1e-3), 1.0 / w->shape)};
        }
        const auto& u = std::get<UniformSpec>(kind);
        return {u.a, u.b};
    }

    /// Unnormalized log density; -inf where the density vanishes.
    double log_pdf(double x) const {
        if (const auto* n = std::get_if<NormalSpec>(&kind)) {
            const double z = (x - n->mu) / n->sigma;
            return -0.5 * z * z - std::log(n->sigma * std::sqrt(2 * std::numbers::pi));
        }
        if (const auto* w = std::get_if<WeibullSpec>(&kind)) {
            if (x < 0) return -std::numeric_limits<double>::infinity();
            if (x == 0) {
                return w->shape > 1 ? -std::numeric_limits<double>::infinity()
                                    : std::log(w->shape);
            }
            return std::log(w->shape) + (w->shape - 1) * std::log(x) -
                   std::pow(x, w->shape);
        }
        const auto& u = std::get<UniformSpec>(kind);
        if (x < u.a || x >= u.b) return -std::numeric_limits<double>::infinity();
        return -std::log(u.b - u.a);
    }

    std::string label() const {
        char buf[64];
        if (const auto* n = std::get_if<NormalSpec>(&kind)) {
            std::snprintf(buf, sizeof buf, "N(%g, %g)", n->mu, n->sigma);
        } else if (const auto* w = std::get_if<WeibullSpec>(&kind)) {
            std::snprintf(buf, sizeof buf, "W(%g)", w->shape);
        } else {
            const auto& u = std::get<UniformSpec>(kind);
            std::snprintf(buf, sizeof buf, "U[%g, %g)", u.a, u.b);
        }
        return buf;
    }
};

/// A continuous distribution projected onto N = 2^n support points.
struct DiscretizedDistribution {
    std::vector<double> grid;   // strictly increasing values x_i
    std::vector<double> probs;  // p_i >= 0, sum = 1

    int n_qubits() const {
        int n = 0;
        while ((std::size_t{1} << n) < grid.size()) ++n;
        return n;
    }
    std::size_t size() const { return grid.size(); }
};

/// Projects the spec onto its 2^n grid.
///
/// Normal and Weibull use inclusive endpoints, x_i = lo + i (hi-lo)/(N-1),
/// with weights proportional to the density and renormalized; weights are
/// evaluated in log space and shifted by the maximum before exponentiating
/// so deep tails cannot underflow to an all-zero vector. The uniform kind
/// uses left endpoints x_i = a + i (b-a)/N, honoring the half-open
/// interval, with exactly equal probabilities.
inline DiscretizedDistribution discretize(const DistributionSpec& spec) {
    if (spec.n_qubits < 1 || spec.n_qubits > StateVector::kMaxQubits) {
        throw std::invalid_argument("discretize: bad qubit count");
    }
    const std::size_t n_points = std::size_t{1} << spec.n_qubits;
    DiscretizedDistribution dd;
    dd.grid.resize(n_points);
    dd.probs.resize(n_points);

    if (const auto* u = std::get_if<UniformSpec>(&spec.kind)) {
        const auto [a, b] = spec.bounds ? *spec.bounds : std::pair{u->a, u->b};
        for (std::size_t i = 0; i < n_points; ++i) {
            dd.grid[i] = a + static_cast<double>(i) * (b - a) / static_cast<double>(n_points);
            dd.probs[i] = 1.0 / static_cast<double>(n_points);
        }
        return dd;
    }

    const auto [lo, hi] = spec.effective_bounds();
    std::vector<double> logw(n_points);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_points; ++i) {
        dd.grid[i] =
            lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n_points - 1);
        logw[i] = spec.log_pdf(dd.grid[i]);
        max_logw = std::max(max_logw, logw[i]);
    }
    if (!std::isfinite(max_logw)) {
        throw std::invalid_argument("discretize: density vanishes on the whole grid");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        dd.probs[i] = std::exp(logw[i] - max_logw);
        total += dd.probs[i];
    }
    for (auto& p : dd.probs) p /= total;
    return dd;
}

inline DiscretizedDistribution point_mass(const std::vector<double>& grid, std::size_t at) {
    DiscretizedDistribution dd;
    dd.grid = grid;
    dd.probs.assign(grid.size(), 0.0);
    dd.probs.at(at) = 1.0;
    return dd;
}

/// Exact reference statistics of a discretized distribution; the
/// brute-force oracle every estimator is checked against.
class ClassicalStats {
public:
    explicit ClassicalStats(const DiscretizedDistribution& dd) : dd_(dd) {
        cdf_.resize(dd.size());
        double acc = 0.0;
        mean_ = 0.0;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            acc += dd.probs[i];
            cdf_[i] = acc;
            mean_ += dd.probs[i] * dd.grid[i];
        }
    }

    double mean() const { return mean_; }
    const std::vector<double>& cdf() const { return cdf_; }

    /// Smallest grid index l with P[X <= x_l] >= level.
    std::size_t var_index(double level) const {
        check_level(level);
        for (std::size_t i = 0; i < cdf_.size(); ++i) {
            if (cdf_[i] >= level - 1e-12) return i;
        }
        return cdf_.size() - 1;
    }

    double var(double level) const { return dd_.grid[var_index(level)]; }

    /// Lower-tail conditional mean E[X | X <= var(level)].
    double cvar(double level) const {
        const std::size_t l = var_index(level);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i <= l; ++i) {
            num += dd_.probs[i] * dd_.grid[i];
            den += dd_.probs[i];
        }
        if (den <= 0) throw std::domain_error("cvar: empty tail");
        return num / den;
    }

    double cdf_at(std::size_t index) const { return cdf_.at(index); }

private:
    static void check_level(double level) {
        if (!(level > 0.0 && level < 1.0)) {
            throw std::invalid_argument("level must be in (0, 1)");
        }
    }

    DiscretizedDistribution dd_;
    std::vector<double> cdf_;
    double mean_ = 0.0;
};

struct TailReference {
    double var = 0.0;
    double cvar = 0.0;
};

/// Closed-form (or high-precision numerical) quantile and lower-tail
/// conditional mean of the *continuous* distribution, used as the
/// "actual" values that discretized estimates are compared against.
inline TailReference continuous_reference(const DistributionSpec& spec, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("level must be in (0, 1)");
    }
    TailReference out;
    if (const auto* n = std::get_if<NormalSpec>(&spec.kind)) {
        boost::math::normal_distribution<double> d(n->mu, n->sigma);
        out.var = boost::math::quantile(d, level);
        const double z = (out.var - n->mu) / n->sigma;
        out.cvar = n->mu - n->sigma * boost::math::pdf(boost::math::normal_distribution<double>(), z) / level;
        return out;
    }
    if (const auto* w = std::get_if<WeibullSpec>(&spec.kind)) {
        const double beta = w->shape;
        out.var = std::pow(-std::log(1.0 - level), 1.0 / beta);
        // E[X 1{X<=q}] = gamma_lower(1 + 1/beta, q^beta).
        const double a = 1.0 + 1.0 / beta;
        const double partial = boost::math::gamma_p(a, std::pow(out.var, beta)) *
                               boost::math::tgamma(a);
        out.cvar = partial / level;
        return out;
    }
    const auto& u = std::get<UniformSpec>(spec.kind);
    out.var = u.a + level * (u.b - u.a);
    out.cvar = 0.5 * (u.a + out.var);
    return out;
}

inline double continuous_mean(const DistributionSpec& spec) {
    if (const auto* n = std::get_if<NormalSpec>(&spec.kind)) return n->mu;
    if (const auto* w = std::get_if<WeibullSpec>(&spec.kind)) {
        return boost::math::tgamma(1.0 + 1.0 / w->shape);
    }
    const auto& u = std::get<UniformSpec>(spec.kind);
    return 0.5 * (u.a + u.b);
}

}  // namespace qae
