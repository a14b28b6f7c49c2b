#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qae/statevector.hpp"

namespace qae {

enum class GateKind { H, X, Y, Z, RY, Phase };

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::RY: return "ry";
        case GateKind::Phase: return "p";
    }
    return "?";
}

/// Single-target gate with an arbitrary set of |1>-conditioned controls.
/// The elementary set is {H, X, Y, Z, RY, Phase} and their singly
/// controlled versions; gates with two or more controls are applied to
/// the state directly and only decomposed when counting metrics (see
/// circuit.hpp).
struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    double angle = 0.0;  // RY / Phase parameter, radians
    std::vector<int> controls;

    static Gate h(int t) { return {GateKind::H, t, 0.0, {}}; }
    static Gate x(int t) { return {GateKind::X, t, 0.0, {}}; }
    static Gate y(int t) { return {GateKind::Y, t, 0.0, {}}; }
    static Gate z(int t) { return {GateKind::Z, t, 0.0, {}}; }
    static Gate ry(int t, double theta) { return {GateKind::RY, t, theta, {}}; }
    static Gate phase(int t, double phi) { return {GateKind::Phase, t, phi, {}}; }

    Gate controlled_by(std::vector<int> ctrls) const {
        Gate g = *this;
        g.controls.insert(g.controls.end(), ctrls.begin(), ctrls.end());
        return g;
    }

    /// Analytic inverse: rotations negate their angle, the rest are
    /// self-inverse. Controls carry over unchanged.
    Gate inverse() const {
        Gate g = *this;
        if (kind == GateKind::RY || kind == GateKind::Phase) g.angle = -angle;
        return g;
    }

    /// 2x2 unitary on the target, row-major {u00, u01, u10, u11}.
    std::array<cdouble, 4> matrix() const {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        switch (kind) {
            case GateKind::H:
                return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
            case GateKind::X:
                return {0.0, 1.0, 1.0, 0.0};
            case GateKind::Y:
                return {0.0, cdouble{0.0, -1.0}, cdouble{0.0, 1.0}, 0.0};
            case GateKind::Z:
                return {1.0, 0.0, 0.0, -1.0};
            case GateKind::RY: {
                const double c = std::cos(angle / 2.0);
                const double s = std::sin(angle / 2.0);
                return {c, -s, s, c};
            }
            case GateKind::Phase:
                return {1.0, 0.0, 0.0, std::polar(1.0, angle)};
        }
        throw std::logic_error("unknown gate kind");
    }
};

}  // namespace qae
