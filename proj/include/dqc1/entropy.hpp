#pragma once

#include <cmath>
#include <stdexcept>

#include "dqc1/linalg.hpp"

namespace dqc1 {

// Eigenvalues at or below this contribute nothing to entropies.
inline constexpr double kEntropyEigenCutoff = 1e-14;

/// Binary Shannon entropy H2(x) = -x log2 x - (1-x) log2 (1-x), in bits.
/// H2(0) = H2(1) = 0 by continuity.
inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

/// Von Neumann entropy S(rho) = -tr(rho log2 rho), in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    const RealVector ev = rho.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > kEntropyEigenCutoff) s -= ev(i) * std::log2(ev(i));
    return s;
}

inline double purity(const DensityMatrix& rho) {
    return (rho.mat() * rho.mat()).trace().real();
}

/// Relative-entropy coherence C(rho) = S(rho_diag) - S(rho), in bits.
inline double coherence(const DensityMatrix& rho) {
    double s_diag = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        const double p = rho.mat()(i, i).real();
        if (p > kEntropyEigenCutoff) s_diag -= p * std::log2(p);
    }
    const double c = s_diag - von_neumann_entropy(rho);
    return c < 0.0 ? 0.0 : c;  // guard roundoff on (near-)diagonal states
}

}  // namespace dqc1
