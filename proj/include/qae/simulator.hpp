#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "qae/circuit.hpp"
#include "qae/gate.hpp"
#include "qae/rng.hpp"
#include "qae/statevector.hpp"

namespace qae {

namespace detail {

/// Core 2x2 update over all basis pairs selected by the control mask.
/// No validation; callers check indices and norms once up front.
inline void apply_gate_unchecked(StateVector& st, const Gate& g) {
    const auto m = g.matrix();
    const std::uint64_t t_mask = std::uint64_t{1} << g.target;
    std::uint64_t c_mask = 0;
    for (int c : g.controls) c_mask |= std::uint64_t{1} << c;

    auto amps = st.amplitudes();
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & t_mask) continue;
        if ((i & c_mask) != c_mask) continue;
        const std::uint64_t j = i | t_mask;
        const cdouble a0 = amps[i];
        const cdouble a1 = amps[j];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[j] = m[2] * a0 + m[3] * a1;
    }
}

inline void check_gate_indices(const StateVector& st, const Gate& g) {
    if (g.target < 0 || g.target >= st.n_qubits()) {
        throw std::out_of_range("apply_gate: target out of range");
    }
    for (int c : g.controls) {
        if (c < 0 || c >= st.n_qubits()) throw std::out_of_range("apply_gate: control out of range");
        if (c == g.target) throw std::invalid_argument("apply_gate: control equals target");
    }
}

inline void check_normalized(const StateVector& st) {
    if (std::abs(st.norm_sq() - 1.0) > 1e-9) {
        throw std::invalid_argument("state is not normalized");
    }
}

}  // namespace detail

/// Returns U|state> for one gate. Norm is preserved to ~1e-15 per gate.
inline StateVector apply_gate(StateVector state, const Gate& g) {
    detail::check_gate_indices(state, g);
    detail::check_normalized(state);
    detail::apply_gate_unchecked(state, g);
    return state;
}

/// Sequential application of all gates in the circuit. Deterministic.
inline StateVector run_circuit(const Circuit& circuit, StateVector initial) {
    if (circuit.n_qubits() != initial.n_qubits()) {
        throw std::invalid_argument("run_circuit: circuit/state width mismatch");
    }
    detail::check_normalized(initial);
    for (const auto& g : circuit.gates()) {
        detail::apply_gate_unchecked(initial, g);
    }
    return initial;
}

inline StateVector run_circuit(const Circuit& circuit) {
    return run_circuit(circuit, StateVector(circuit.n_qubits()));
}

/// Exact marginal probability of measuring |1> on one qubit.
inline double probability_of_one(const StateVector& st, int qubit) {
    if (qubit < 0 || qubit >= st.n_qubits()) {
        throw std::out_of_range("probability_of_one: qubit out of range");
    }
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    double p = 0.0;
    const auto amps = st.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) p += std::norm(amps[i]);
    }
    return p;
}

/// Exact marginal distribution over an ordered list of qubits. Outcome
/// bit j of the result index is the value of qubits[j].
inline std::vector<double> marginal_probabilities(const StateVector& st,
                                                  std::span<const int> qubits) {
    for (int q : qubits) {
        if (q < 0 || q >= st.n_qubits()) {
            throw std::out_of_range("marginal_probabilities: qubit out of range");
        }
    }
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = st.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        std::uint64_t y = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            y |= ((i >> qubits[j]) & 1u) << j;
        }
        out[y] += std::norm(amps[i]);
    }
    return out;
}

/// Seeded full-register measurement. Returns basis index -> count;
/// counts sum to `shots` and identical seeds give identical maps.
inline std::map<std::uint64_t, std::uint64_t> sample(const StateVector& st,
                                                     std::uint64_t shots,
                                                     std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
    const auto probs = st.probabilities();
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++counts[rng.discrete(cdf)];
    }
    return counts;
}

}  // namespace qae
