#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qae {

using cdouble = std::complex<double>;

/// Dense amplitude vector over n qubits.
///
/// Convention used throughout the library: qubit 0 is the least
/// significant bit of the basis index, i.e. basis state |x> has
/// amplitude amps[x] and bit q of x is the value of qubit q.
class StateVector {
public:
    /// Soft cap: 2^20 complex doubles = 16 MiB. Everything in this
    /// project runs on far fewer qubits.
    static constexpr int kMaxQubits = 20;

    /// All-zeros computational basis state |0...0>.
    explicit StateVector(int n_qubits) {
        check_n(n_qubits);
        n_ = n_qubits;
        amps_.assign(std::size_t{1} << n_, cdouble{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static StateVector from_amplitudes(int n_qubits, std::vector<cdouble> amps) {
        check_n(n_qubits);
        if (amps.size() != (std::size_t{1} << n_qubits)) {
            throw std::invalid_argument("StateVector: amplitude count must be 2^n");
        }
        StateVector st(n_qubits);
        st.amps_ = std::move(amps);
        if (std::abs(st.norm_sq() - 1.0) > 1e-9) {
            throw std::invalid_argument("StateVector: amplitudes are not normalized");
        }
        return st;
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const cdouble> amplitudes() const { return amps_; }
    std::span<cdouble> amplitudes() { return amps_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    /// Exact probability vector |amp|^2 over all 2^n basis states.
    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
        return p;
    }

private:
    static void check_n(int n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw std::invalid_argument("StateVector: n_qubits must be in [1, " +
                                        std::to_string(kMaxQubits) + "]");
        }
    }

    int n_ = 0;
    std::vector<cdouble> amps_;
};

}  // namespace qae
