#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dqc1 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Validation tolerances for quantum-state wrappers.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kUnitaryTol = 1e-10;

inline double max_abs(const ComplexMatrix& m) {
    return m.cwiseAbs().maxCoeff();
}

inline bool is_power_of_two(Eigen::Index n) {
    return n > 0 && (n & (n - 1)) == 0;
}

/// Kronecker product a ⊗ b.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Hermitian, unit-trace, positive-semidefinite matrix. Construction validates
/// all three properties; eigenvalues below kEigenvalueFloor are rejected.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols())
            throw std::invalid_argument("DensityMatrix: matrix not square");
        if (max_abs(mat_ - mat_.adjoint()) > kHermitianTol)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(mat_.trace() - Complex(1.0)) > kTraceTol)
            throw std::invalid_argument("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    /// Eigenvalues ascending; values in [kEigenvalueFloor, 0) clamped to 0.
    RealVector eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
        RealVector ev = es.eigenvalues();
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) < 0.0) ev(i) = 0.0;
        return ev;
    }

  private:
    ComplexMatrix mat_;
};

/// Square matrix with U·U† = I within kUnitaryTol.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(ComplexMatrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols())
            throw std::invalid_argument("UnitaryMatrix: matrix not square");
        ComplexMatrix delta = mat_ * mat_.adjoint();
        delta -= ComplexMatrix::Identity(mat_.rows(), mat_.cols());
        if (max_abs(delta) > kUnitaryTol)
            throw std::invalid_argument("UnitaryMatrix: U U^dag deviates from identity");
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }
    Complex trace() const { return mat_.trace(); }

  private:
    ComplexMatrix mat_;
};

/// Reduced state on the subsystems listed in `keep`. `subsystem_dims` factors
/// rho.dim with the leftmost subsystem as the most significant tensor index.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<Eigen::Index>& subsystem_dims,
                                   const std::vector<std::size_t>& keep) {
    Eigen::Index total = 1;
    for (Eigen::Index d : subsystem_dims) {
        if (d < 1) throw std::invalid_argument("partial_trace: subsystem dim < 1");
        total *= d;
    }
    if (total != rho.dim())
        throw std::invalid_argument("partial_trace: subsystem dims do not factor the state dim");
    if (keep.empty())
        throw std::invalid_argument("partial_trace: keep set is empty");

    const std::size_t ns = subsystem_dims.size();
    std::vector<bool> kept(ns, false);
    for (std::size_t s : keep) {
        if (s >= ns) throw std::invalid_argument("partial_trace: keep index out of range");
        kept[s] = true;
    }

    // Strides of each subsystem in the flat index (row-major over subsystems).
    std::vector<Eigen::Index> stride(ns, 1);
    for (std::size_t s = ns; s-- > 1;)
        stride[s - 1] = stride[s] * subsystem_dims[s];

    std::vector<std::size_t> keep_idx, trace_idx;
    for (std::size_t s = 0; s < ns; ++s) (kept[s] ? keep_idx : trace_idx).push_back(s);

    Eigen::Index keep_dim = 1, trace_dim = 1;
    for (std::size_t s : keep_idx) keep_dim *= subsystem_dims[s];
    for (std::size_t s : trace_idx) trace_dim *= subsystem_dims[s];

    // Maps a multi-index over a subsystem list to the flat offset contribution.
    auto offset = [&](const std::vector<std::size_t>& subs, Eigen::Index flat) {
        Eigen::Index off = 0;
        for (std::size_t p = subs.size(); p-- > 0;) {
            std::size_t s = subs[p];
            off += (flat % subsystem_dims[s]) * stride[s];
            flat /= subsystem_dims[s];
        }
        return off;
    };

    ComplexMatrix out = ComplexMatrix::Zero(keep_dim, keep_dim);
    for (Eigen::Index r = 0; r < keep_dim; ++r) {
        const Eigen::Index ro = offset(keep_idx, r);
        for (Eigen::Index c = 0; c < keep_dim; ++c) {
            const Eigen::Index co = offset(keep_idx, c);
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < trace_dim; ++t) {
                const Eigen::Index to = offset(trace_idx, t);
                sum += rho.mat()(ro + to, co + to);
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix(std::move(out));
}

}  // namespace dqc1
