#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qae/circuit.hpp"
#include "qae/encoding.hpp"
#include "qae/rng.hpp"
#include "qae/simulator.hpp"

namespace qae {

/// One circuit application of the Grover operator is capped at this
/// power so a runaway schedule cannot blow up time or memory.
inline constexpr std::uint64_t kMaxGroverPower = std::uint64_t{1} << 20;

/// State preparation A plus the flag qubit whose |1> probability is the
/// amplitude a = sin^2(theta_a) that every estimator targets.
struct AmplitudeProblem {
    Circuit a_circuit;
    int objective_qubit = 0;

    int n_total() const { return a_circuit.n_qubits(); }

    static AmplitudeProblem from_distribution(const DiscretizedDistribution& dd,
                                              const ObjectiveKind& kind) {
        const int n = dd.n_qubits();
        Circuit a(n + 1);
        a.append_shifted(build_loader(dd), 0);
        a.append(build_objective(n, kind));
        return {std::move(a), n};
    }

    /// One-qubit problem with a known amplitude; handy for calibration
    /// and coverage studies where the ground truth must be dialed in.
    static AmplitudeProblem single_qubit(double a) {
        if (a < 0.0 || a > 1.0) throw std::invalid_argument("amplitude must be in [0, 1]");
        Circuit c(1);
        c.append(Gate::ry(0, 2.0 * std::asin(std::sqrt(a))));
        return {std::move(c), 0};
    }
};

/// Exact ground-truth amplitude from the statevector; the oracle all
/// estimator tests measure themselves against.
inline double true_amplitude(const AmplitudeProblem& p) {
    return probability_of_one(run_circuit(p.a_circuit), p.objective_qubit);
}

namespace detail {

/// Phase flip of |0...0> over all qubits: X-conjugated multi-controlled Z.
inline void append_zero_reflection(Circuit& c) {
    const int n = c.n_qubits();
    for (int q = 0; q < n; ++q) c.append(Gate::x(q));
    std::vector<int> controls;
    for (int q = 1; q < n; ++q) controls.push_back(q);
    c.append(Gate::z(0).controlled_by(controls));
    for (int q = 0; q < n; ++q) c.append(Gate::x(q));
}

/// Four-gate global -1 on qubit 0: (X Z)^2 = -I. Irrelevant for plain
/// powers but load-bearing once the operator is controlled, where the
/// sign becomes a relative phase the phase-estimation ancillas see.
inline void append_minus_identity(Circuit& c) {
    c.append(Gate::z(0));
    c.append(Gate::x(0));
    c.append(Gate::z(0));
    c.append(Gate::x(0));
}

}  // namespace detail

/// Grover operator Q = A S_0 A^dag S_psi0.
///
/// S_psi0 is realized as Z on the objective qubit and S_0 as the
/// X-conjugated multi-controlled Z; both equal the textbook reflections
/// only up to sign, so a -I block is appended to restore the exact
/// operator. Within the two-dimensional invariant subspace Q is then the
/// rotation by 2 theta_a, and after k applications on A|0> the good-state
/// probability is sin^2((2k+1) theta_a).
inline Circuit build_grover(const AmplitudeProblem& p) {
    Circuit q(p.n_total());
    q.append(Gate::z(p.objective_qubit));  // S_psi0 up to sign
    q.append(p.a_circuit.inverse());
    detail::append_zero_reflection(q);     // S_0
    q.append(p.a_circuit);
    detail::append_minus_identity(q);
    return q;
}

/// A followed by k copies of Q; metrics grow affinely in k.
inline Circuit apply_power(const AmplitudeProblem& p, std::uint64_t k) {
    if (k > kMaxGroverPower) throw std::invalid_argument("grover power exceeds cap");
    Circuit c(p.n_total());
    c.append(p.a_circuit);
    const Circuit q = build_grover(p);
    for (std::uint64_t i = 0; i < k; ++i) c.append(q);
    return c;
}

struct QueryTally {
    std::uint64_t oracle_queries_a = 0;   // applications of A or A^dag
    std::uint64_t grover_applications = 0;
    std::uint64_t shots = 0;

    void add_round(std::uint64_t k, std::uint64_t n_shots) {
        oracle_queries_a += n_shots * (2 * k + 1);
        grover_applications += n_shots * k;
        shots += n_shots;
    }
};

/// Memoizing evaluator for one amplitude problem.
///
/// Exact good-state probabilities are extended one Grover power at a
/// time from a single frontier state, and decomposed circuit metrics are
/// accumulated the same way, so estimators can probe arbitrary powers
/// without rebuilding circuits. Thread-safe; independent estimator runs
/// may share one oracle.
class PowerOracle {
public:
    explicit PowerOracle(AmplitudeProblem problem)
        : problem_(std::move(problem)),
          grover_(build_grover(problem_)),
          frontier_(run_circuit(problem_.a_circuit)),
          metrics_acc_(problem_.n_total()) {
        good_prob_.push_back(probability_of_one(frontier_, problem_.objective_qubit));
        metrics_acc_.add(problem_.a_circuit);
        metrics_.push_back(metrics_acc_.metrics());
    }

    const AmplitudeProblem& problem() const { return problem_; }

    /// Exact amplitude a = P(objective = 1 | A|0>).
    double amplitude() {
        std::lock_guard lock(mu_);
        return good_prob_[0];
    }

    /// Exact P(objective = 1) after A followed by k Grover applications.
    double good_probability(std::uint64_t k) {
        std::lock_guard lock(mu_);
        extend(k);
        return good_prob_[k];
    }

    /// Draws `shots` measurements of the objective qubit at power k and
    /// returns the number of |1> outcomes. Query counters accrue
    /// shots * (2k+1) A-applications and shots * k Grover applications.
    std::uint64_t sample_good(std::uint64_t k, std::uint64_t shots, Rng& rng,
                              QueryTally& tally) {
        if (shots < 1) throw std::invalid_argument("sample_good: shots must be >= 1");
        const double p = good_probability(k);
        tally.add_round(k, shots);
        return rng.binomial(shots, p);
    }

    /// Decomposed gate count and depth of the power-k circuit.
    CircuitMetrics power_metrics(std::uint64_t k) {
        std::lock_guard lock(mu_);
        extend(k);
        return metrics_[k];
    }

private:
    void extend(std::uint64_t k) {
        if (k > kMaxGroverPower) throw std::invalid_argument("grover power exceeds cap");
        while (good_prob_.size() <= k) {
            for (const auto& g : grover_.gates()) {
                detail::apply_gate_unchecked(frontier_, g);
            }
            good_prob_.push_back(probability_of_one(frontier_, problem_.objective_qubit));
            metrics_acc_.add(grover_);
            metrics_.push_back(metrics_acc_.metrics());
        }
    }

    AmplitudeProblem problem_;
    Circuit grover_;
    StateVector frontier_;
    MetricsAccumulator metrics_acc_;
    std::vector<double> good_prob_;
    std::vector<CircuitMetrics> metrics_;
    std::mutex mu_;
};

}  // namespace qae
