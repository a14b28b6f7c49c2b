#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qae/circuit.hpp"
#include "qae/distributions.hpp"

namespace qae {

/// The payload function f rotated onto the objective qubit:
///   mean            f(i) = i / (N-1)
///   cdf_threshold   f(i) = 1 for i <= l, else 0
///   cvar            f(i) = i / l_alpha for i <= l_alpha, else 0
///                   (f(0) = 1 when l_alpha = 0, the one-point tail limit)
struct ObjectiveKind {
    enum class Tag { mean, cdf_threshold, cvar };

    Tag tag = Tag::mean;
    std::size_t threshold = 0;  // l or l_alpha, a grid index

    static ObjectiveKind mean() { return {Tag::mean, 0}; }
    static ObjectiveKind cdf_threshold(std::size_t l) { return {Tag::cdf_threshold, l}; }
    static ObjectiveKind cvar(std::size_t l_alpha) { return {Tag::cvar, l_alpha}; }

    double f(std::size_t i, std::size_t n_states) const {
        switch (tag) {
            case Tag::mean:
                return static_cast<double>(i) / static_cast<double>(n_states - 1);
            case Tag::cdf_threshold:
                return i <= threshold ? 1.0 : 0.0;
            case Tag::cvar:
                if (i > threshold) return 0.0;
                if (threshold == 0) return 1.0;
                return static_cast<double>(i) / static_cast<double>(threshold);
        }
        return 0.0;
    }

    const char* name() const {
        switch (tag) {
            case Tag::mean: return "mean";
            case Tag::cdf_threshold: return "cdf_threshold";
            case Tag::cvar: return "cvar";
        }
        return "?";
    }
};

namespace detail {

/// Appends RY(angle) on `target` conditioned on the control qubits
/// matching `pattern` (bit j of pattern belongs to controls[j]).
/// Zero-bits are realized by conjugating that control with X.
inline void append_pattern_ry(Circuit& c, int target, const std::vector<int>& controls,
                              std::uint64_t pattern, double angle) {
    std::vector<int> flips;
    for (std::size_t j = 0; j < controls.size(); ++j) {
        if (((pattern >> j) & 1u) == 0) flips.push_back(controls[j]);
    }
    for (int q : flips) c.append(Gate::x(q));
    c.append(Gate::ry(target, angle).controlled_by(controls));
    for (int q : flips) c.append(Gate::x(q));
}

inline double rotation_for(double fraction) {
    const double clamped = std::min(1.0, std::max(0.0, fraction));
    return 2.0 * std::asin(std::sqrt(clamped));
}

}  // namespace detail

/// State-preparation circuit A_p: applying it to |0>^n yields amplitudes
/// sqrt(p_i), all real and nonnegative.
///
/// Construction is the conditional-probability rotation tree: level L
/// rotates qubit n-1-L by 2 asin(sqrt(P[bit = 1 | prefix])) once per
/// prefix of the L most significant bits, so the circuit is exact up to
/// floating-point roundoff. Subtrees of probability zero are skipped.
inline Circuit build_loader(const DiscretizedDistribution& dd) {
    const int n = dd.n_qubits();
    if (dd.grid.size() != (std::size_t{1} << n) || dd.probs.size() != dd.grid.size()) {
        throw std::invalid_argument("build_loader: grid size must be a power of two");
    }
    double total = 0.0;
    for (double p : dd.probs) total += p;
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("build_loader: probabilities are not normalized");
    }

    // prefix[i] = sum of probs over [0, i)
    std::vector<double> prefix(dd.size() + 1, 0.0);
    for (std::size_t i = 0; i < dd.size(); ++i) prefix[i + 1] = prefix[i] + dd.probs[i];
    auto range_sum = [&](std::size_t lo, std::size_t hi) { return prefix[hi] - prefix[lo]; };

    Circuit c(n);
    for (int level = 0; level < n; ++level) {
        const int target = n - 1 - level;
        const std::size_t block = std::size_t{1} << (n - level);  // indices per prefix node
        std::vector<int> controls;
        for (int j = 0; j < level; ++j) controls.push_back(n - 1 - j);

        for (std::uint64_t node = 0; node < (std::uint64_t{1} << level); ++node) {
            const std::size_t lo = node * block;
            const double p_node = range_sum(lo, lo + block);
            if (p_node <= 0.0) continue;
            const double p_one = range_sum(lo + block / 2, lo + block);
            // bit j of `pattern` must match qubit n-1-j, i.e. bit level-1-j of node
            std::uint64_t pattern = 0;
            for (int j = 0; j < level; ++j) {
                pattern |= ((node >> (level - 1 - j)) & 1u) << j;
            }
            detail::append_pattern_ry(c, target, controls, pattern,
                                      detail::rotation_for(p_one / p_node));
        }
    }
    return c;
}

/// Payload circuit F on n+1 qubits (objective = qubit n):
///   F |i>|0> = sqrt(1 - f(i)) |i>|0> + sqrt(f(i)) |i>|1>.
///
/// Realized exactly as one basis-state-controlled RY per index with
/// f(i) > 0, angle 2 asin(sqrt(f(i))); f values are clamped to [0, 1]
/// before the arcsine. After loader + objective the objective qubit
/// carries P(1) = sum_i p_i f(i) exactly.
inline Circuit build_objective(int n_qubits, const ObjectiveKind& kind) {
    if (n_qubits < 1 || n_qubits + 1 > StateVector::kMaxQubits) {
        throw std::invalid_argument("build_objective: bad qubit count");
    }
    const std::size_t n_states = std::size_t{1} << n_qubits;
    if (kind.tag != ObjectiveKind::Tag::mean && kind.threshold >= n_states) {
        throw std::invalid_argument("build_objective: threshold index out of range");
    }

    Circuit c(n_qubits + 1);
    std::vector<int> controls;
    for (int q = 0; q < n_qubits; ++q) controls.push_back(q);
    for (std::size_t i = 0; i < n_states; ++i) {
        const double f = kind.f(i, n_states);
        if (f <= 0.0) continue;
        detail::append_pattern_ry(c, n_qubits, controls, i, detail::rotation_for(f));
    }
    return c;
}

/// Maps an amplitude estimate back to value units.
///
///   mean           x_0 + (x_{N-1} - x_0) * a_hat   (affine index-to-value map)
///   cdf_threshold  a_hat                           (already a probability)
///   cvar           x_0 + (x_{l_alpha} - x_0) * a_hat / tail_probability
///
/// The cvar form is the affine map of the index-domain tail mean
/// l_alpha * a_hat / P[X <= l_alpha]; on grids that start at zero it
/// reduces to x_{l_alpha} * a_hat / P. `tail_probability` is the
/// (estimated) P[X <= x_{l_alpha}] and must be positive for cvar.
inline double to_value_domain(double a_hat, const DiscretizedDistribution& dd,
                              const ObjectiveKind& kind, double tail_probability = 1.0) {
    if (a_hat < -1e-12 || a_hat > 1.0 + 1e-12) {
        throw std::invalid_argument("to_value_domain: a_hat outside [0, 1]");
    }
    switch (kind.tag) {
        case ObjectiveKind::Tag::mean:
            return dd.grid.front() + (dd.grid.back() - dd.grid.front()) * a_hat;
        case ObjectiveKind::Tag::cdf_threshold:
            return a_hat;
        case ObjectiveKind::Tag::cvar: {
            if (tail_probability <= 0.0) {
                throw std::domain_error("to_value_domain: cvar tail probability is zero");
            }
            const double x0 = dd.grid.front();
            const double xl = dd.grid.at(kind.threshold);
            return x0 + (xl - x0) * a_hat / tail_probability;
        }
    }
    throw std::logic_error("unknown objective kind");
}

}  // namespace qae
