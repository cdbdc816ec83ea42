#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "dqc1/linalg.hpp"

namespace dqc1 {

/// Two real features in radians; the encoding phases are 2pi-periodic in each
/// feature, so [0, 2pi) is the canonical domain.
using FeatureVector = std::array<double, 2>;

inline void validate_feature(const FeatureVector& x) {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
        throw std::invalid_argument("FeatureVector: non-finite value");
}

struct FeatureMapConfig {
    int n_qubits = 2;
    int layers = 2;

    void validate() const {
        if (n_qubits != 2)
            throw std::invalid_argument("FeatureMapConfig: pairwise map requires n_qubits = 2");
        if (layers < 1)
            throw std::invalid_argument("FeatureMapConfig: layers must be >= 1");
    }
};

struct Phases {
    double phi1;
    double phi2;
    double phi12;
};

/// phi_1 = x1, phi_2 = x2, phi_12 = (pi - x1)(pi - x2).
inline Phases phase_functions(const FeatureVector& x) {
    validate_feature(x);
    return {x[0], x[1], (M_PI - x[0]) * (M_PI - x[1])};
}

/// H ⊗ H on two qubits.
inline ComplexMatrix hadamard_pair() {
    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return tensor_product(h, h);
}

/// Diagonal phase unitary exp(i (phi1 Z1 + phi2 Z2 + phi12 Z1 Z2)).
/// Basis order |00>, |01>, |10>, |11>; bit value 0 has Z eigenvalue +1.
inline UnitaryMatrix encoding_phase_unitary(const FeatureVector& x) {
    const Phases p = phase_functions(x);
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
        const int z1 = 1 - 2 * ((k >> 1) & 1);
        const int z2 = 1 - 2 * (k & 1);
        const double phase = p.phi1 * z1 + p.phi2 * z2 + p.phi12 * z1 * z2;
        u(k, k) = std::polar(1.0, phase);
    }
    return UnitaryMatrix(std::move(u));
}

/// Data-encoding unitary: `layers` repetitions of U_phi(x) · (H ⊗ H).
/// Within a layer the Hadamards act on the state first.
inline UnitaryMatrix encoding_unitary(const FeatureVector& x, const FeatureMapConfig& cfg) {
    cfg.validate();
    const ComplexMatrix layer = encoding_phase_unitary(x).mat() * hadamard_pair();
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    for (int l = 0; l < cfg.layers; ++l) u = layer * u;
    return UnitaryMatrix(std::move(u));
}

/// Kernel unitary u(x) · u(x2)†; its normalized trace magnitude is the kernel.
inline UnitaryMatrix kernel_unitary(const FeatureVector& x, const FeatureVector& x2,
                                    const FeatureMapConfig& cfg) {
    return UnitaryMatrix(encoding_unitary(x, cfg).mat() * encoding_unitary(x2, cfg).mat().adjoint());
}

}  // namespace dqc1
