#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qae/gate.hpp"

namespace qae {

/// Ordered gate list over a fixed-width qubit register.
class Circuit {
public:
    explicit Circuit(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
            throw std::invalid_argument("Circuit: bad qubit count");
        }
    }

    int n_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    void append(Gate g) {
        validate(g);
        gates_.push_back(std::move(g));
    }

    /// Concatenate another circuit of the same width.
    void append(const Circuit& other) {
        if (other.n_ != n_) throw std::invalid_argument("Circuit: width mismatch");
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    }

    /// Concatenate a narrower circuit with every gate shifted up by
    /// `offset` qubits, optionally adding `extra_control` to each gate.
    void append_shifted(const Circuit& other, int offset, int extra_control = -1) {
        for (Gate g : other.gates_) {
            g.target += offset;
            for (auto& c : g.controls) c += offset;
            if (extra_control >= 0) g.controls.push_back(extra_control);
            append(std::move(g));
        }
    }

    /// Exact inverse: gates reversed, each inverted analytically.
    Circuit inverse() const {
        Circuit inv(n_);
        inv.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            inv.gates_.push_back(it->inverse());
        }
        return inv;
    }

private:
    void validate(const Gate& g) const {
        if (g.target < 0 || g.target >= n_) {
            throw std::invalid_argument("Circuit: target out of range");
        }
        for (int c : g.controls) {
            if (c < 0 || c >= n_) throw std::invalid_argument("Circuit: control out of range");
            if (c == g.target) throw std::invalid_argument("Circuit: control equals target");
        }
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            for (std::size_t j = i + 1; j < g.controls.size(); ++j) {
                if (g.controls[i] == g.controls[j]) {
                    throw std::invalid_argument("Circuit: duplicate control");
                }
            }
        }
    }

    int n_;
    std::vector<Gate> gates_;
};

struct CircuitMetrics {
    std::uint64_t gate_count = 0;
    std::uint64_t depth = 0;
};

/// Streaming gate-count / depth calculator.
///
/// Counting rule (fixed so that reported numbers are reproducible):
/// a gate with zero or one control is elementary and counts as 1; a gate
/// with c >= 2 controls is expanded by the ancilla-free square-root
/// recursion
///
///   C^c(U)(q1..qc; t) -> C(V)(qc; t) C^{c-1}(X)(q1..q_{c-1}; qc)
///                        C(V^dag)(qc; t) C^{c-1}(X) C^{c-1}(V)(q1..q_{c-1}; t)
///
/// with V^2 = U, applied recursively, so the count satisfies
/// f(c) = 3 f(c-1) + 2 with f(0) = f(1) = 1. Depth uses as-soon-as-
/// possible layering of the expanded elementary gates: each gate lands
/// one layer after the last gate that touched any of its qubits.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(int n_qubits) : layer_(n_qubits, 0) {}

    void add(const Gate& g) {
        if (g.controls.size() <= 1) {
            int ctrl = g.controls.empty() ? -1 : g.controls[0];
            add_elementary(g.target, ctrl);
        } else {
            expand(g.target, g.controls);
        }
    }

    void add(const Circuit& c) {
        for (const auto& g : c.gates()) add(g);
    }

    std::uint64_t gate_count() const { return count_; }

    std::uint64_t depth() const {
        std::uint64_t d = 0;
        for (auto l : layer_) d = std::max(d, l);
        return d;
    }

    CircuitMetrics metrics() const { return {count_, depth()}; }

private:
    void add_elementary(int target, int ctrl) {
        ++count_;
        std::uint64_t l = layer_[target];
        if (ctrl >= 0) l = std::max(l, layer_[ctrl]);
        ++l;
        layer_[target] = l;
        if (ctrl >= 0) layer_[ctrl] = l;
    }

    void expand(int target, const std::vector<int>& controls) {
        const std::size_t c = controls.size();
        if (c == 0) {
            add_elementary(target, -1);
            return;
        }
        if (c == 1) {
            add_elementary(target, controls[0]);
            return;
        }
        std::vector<int> head(controls.begin(), controls.end() - 1);
        const int last = controls.back();
        add_elementary(target, last);  // C(V)
        expand(last, head);            // C^{c-1}(X)
        add_elementary(target, last);  // C(V^dag)
        expand(last, head);            // C^{c-1}(X)
        expand(target, head);          // C^{c-1}(V)
    }

    std::vector<std::uint64_t> layer_;
    std::uint64_t count_ = 0;
};

inline CircuitMetrics circuit_metrics(const Circuit& c) {
    MetricsAccumulator acc(c.n_qubits());
    acc.add(c);
    return acc.metrics();
}

}  // namespace qae
