#pragma once

#include <numbers>

#include "qae/circuit.hpp"

namespace qae {

/// Quantum Fourier transform on m qubits:
///   QFT|j> = 2^{-m/2} sum_k exp(2*pi*i*j*k / 2^m) |k>
/// in the library's LSB-first index convention. The trailing qubit
/// reversal is realized with swaps built from three CX gates so the
/// circuit is self-contained.
inline Circuit qft(int m) {
    if (m < 1) throw std::invalid_argument("qft: m must be >= 1");
    Circuit c(m);
    for (int target = m - 1; target >= 0; --target) {
        c.append(Gate::h(target));
        for (int d = 1; d <= target; ++d) {
            const double angle = std::numbers::pi / static_cast<double>(1 << d);
            c.append(Gate::phase(target, angle).controlled_by({target - d}));
        }
    }
    for (int q = 0; q < m / 2; ++q) {
        const int r = m - 1 - q;
        c.append(Gate::x(r).controlled_by({q}));
        c.append(Gate::x(q).controlled_by({r}));
        c.append(Gate::x(r).controlled_by({q}));
    }
    return c;
}

/// Inverse transform; composing with qft(m) gives the identity.
inline Circuit inverse_qft(int m) { return qft(m).inverse(); }

}  // namespace qae
