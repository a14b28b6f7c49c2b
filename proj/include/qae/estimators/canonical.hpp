#pragma once

#include <cmath>
#include <numbers>

#include "qae/estimators/common.hpp"
#include "qae/qft.hpp"

namespace qae {

/// Phase-estimation amplitude estimation with m ancilla qubits.
///
/// Hadamards put the ancillas into uniform superposition, ancilla j
/// controls Q^{2^j}, and the inverse QFT maps the kicked-back phase onto
/// the ancilla register. A measured integer y corresponds to
/// theta = pi y / M with M = 2^m, and the estimate is the modal
/// a~ = sin^2(pi y / M) over `shots` register measurements (ties break
/// toward the smaller angle). The confidence interval is the plug-in
/// evaluation of the phase-estimation error bound
/// 2 pi sqrt(a~(1-a~))/M + pi^2/M^2, which a measurement satisfies with
/// probability at least 8/pi^2.
inline EstimationResult canonical_qae(PowerOracle& oracle, int m, std::uint64_t shots,
                                      std::uint64_t seed) {
    if (m < 1 || m > 10) throw std::invalid_argument("canonical_qae: m must be in [1, 10]");
    if (shots < 1) throw std::invalid_argument("canonical_qae: shots must be >= 1");
    const auto& problem = oracle.problem();
    const int n_problem = problem.n_total();
    if (n_problem + m > StateVector::kMaxQubits) {
        throw std::invalid_argument("canonical_qae: register exceeds the qubit cap");
    }

    const std::uint64_t n_states = std::uint64_t{1} << m;
    Circuit qpe(n_problem + m);
    qpe.append_shifted(problem.a_circuit, 0);
    for (int j = 0; j < m; ++j) qpe.append(Gate::h(n_problem + j));
    const Circuit grover = build_grover(problem);
    for (int j = 0; j < m; ++j) {
        for (std::uint64_t rep = 0; rep < (std::uint64_t{1} << j); ++rep) {
            qpe.append_shifted(grover, 0, n_problem + j);
        }
    }
    qpe.append_shifted(inverse_qft(m), n_problem);

    const auto st = run_circuit(qpe);
    std::vector<int> ancillas(m);
    for (int j = 0; j < m; ++j) ancillas[j] = n_problem + j;
    const auto y_probs = marginal_probabilities(st, ancillas);

    std::vector<double> cdf(y_probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < y_probs.size(); ++i) {
        acc += y_probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    std::vector<std::uint64_t> counts(n_states, 0);
    for (std::uint64_t s = 0; s < shots; ++s) ++counts[rng.discrete(cdf)];

    auto estimate_for = [&](std::uint64_t y) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(y) /
                                  static_cast<double>(n_states));
        return s * s;
    };
    std::uint64_t best_y = 0;
    for (std::uint64_t y = 1; y < n_states; ++y) {
        if (counts[y] > counts[best_y] ||
            (counts[y] == counts[best_y] && estimate_for(y) < estimate_for(best_y))) {
            best_y = y;
        }
    }

    EstimationResult res;
    res.algorithm = "canonical";
    res.seed = seed;
    res.a_hat = estimate_for(best_y);
    const double big_m = static_cast<double>(n_states);
    const double bound = 2.0 * std::numbers::pi * std::sqrt(res.a_hat * (1.0 - res.a_hat)) /
                             big_m +
                         std::numbers::pi * std::numbers::pi / (big_m * big_m);
    res.ci_lo = clamp01(res.a_hat - bound);
    res.ci_hi = clamp01(res.a_hat + bound);

    // Every shot runs A once plus M-1 controlled Grover blocks, i.e. the
    // power-(M-1) cost in oracle units.
    QueryTally tally;
    tally.add_round(n_states - 1, shots);
    res.rounds_log.push_back({n_states - 1, shots, counts[best_y]});
    res.finish_counts(tally);
    res.max_circuit_depth = circuit_metrics(qpe).depth;
    return res;
}

/// Error bound of the phase-estimation estimate at amplitude `a` with
/// M = 2^m quantum samples.
inline double canonical_error_bound(double a, int m) {
    const double big_m = static_cast<double>(std::uint64_t{1} << m);
    return 2.0 * std::numbers::pi * std::sqrt(a * (1.0 - a)) / big_m +
           std::numbers::pi * std::numbers::pi / (big_m * big_m);
}

}  // namespace qae
