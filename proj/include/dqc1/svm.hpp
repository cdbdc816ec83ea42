#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dqc1/engine.hpp"
#include "dqc1/feature_map.hpp"
#include "dqc1/rng.hpp"

namespace dqc1 {

inline constexpr double kKernelSymTol = 1e-9;
inline constexpr double kPsdRepairTol = 1e-9;
inline constexpr double kSmoKktTol = 1e-4;
inline constexpr long long kSmoMaxPairUpdates = 1'000'000;

struct KernelMatrix {
    RealMatrix values;
    SamplingMode mode = SamplingMode::exact;
    double alpha = 1.0;
    bool psd_repaired = false;

    Eigen::Index size() const { return values.rows(); }
};

struct SvmModel {
    RealVector beta;                   // dual coefficients, in [0, C]
    double bias = 0.0;
    std::vector<int> labels;           // +1 / -1
    std::vector<FeatureVector> points; // training points, for kernel-row evaluation
    double c = 0.0;
    bool converged = true;
};

/// Gram matrix of raw kernel estimates over all pairs i <= j (mirrored).
/// Each pair draws from its own derived measurement stream, so the result is
/// independent of evaluation order.
inline KernelMatrix build_kernel_matrix(const std::vector<FeatureVector>& points,
                                        const Dqc1Config& cfg, const FeatureMapConfig& fm) {
    if (points.size() < 2)
        throw std::invalid_argument("build_kernel_matrix: need at least 2 points");
    cfg.validate();
    fm.validate();

    std::vector<UnitaryMatrix> enc;
    enc.reserve(points.size());
    for (const auto& x : points) enc.push_back(encoding_unitary(x, fm));

    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    RealMatrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const UnitaryMatrix u(enc[i].mat() * enc[j].mat().adjoint());
            const double v = estimate_kernel_raw(u, cfg, pair_seed(cfg.seed, i, j, 0));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return {std::move(k), cfg.mode, cfg.alpha, false};
}

/// Kernel rows K(test_t, train_j) for prediction. Stream indices continue
/// past the training block so train and test estimates never share a stream.
inline RealMatrix build_kernel_rows(const std::vector<FeatureVector>& test_points,
                                    const std::vector<FeatureVector>& train_points,
                                    const Dqc1Config& cfg, const FeatureMapConfig& fm) {
    if (train_points.empty())
        throw std::invalid_argument("build_kernel_rows: empty training set");
    cfg.validate();
    fm.validate();

    std::vector<UnitaryMatrix> enc_train, enc_test;
    enc_train.reserve(train_points.size());
    for (const auto& x : train_points) enc_train.push_back(encoding_unitary(x, fm));
    enc_test.reserve(test_points.size());
    for (const auto& x : test_points) enc_test.push_back(encoding_unitary(x, fm));

    RealMatrix rows(static_cast<Eigen::Index>(test_points.size()),
                    static_cast<Eigen::Index>(train_points.size()));
    for (std::size_t t = 0; t < test_points.size(); ++t)
        for (std::size_t j = 0; j < train_points.size(); ++j) {
            const UnitaryMatrix u(enc_test[t].mat() * enc_train[j].mat().adjoint());
            rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                estimate_kernel_raw(u, cfg, pair_seed(cfg.seed, train_points.size() + t, j, 0));
        }
    return rows;
}

/// Projects a symmetric kernel onto the PSD cone by clipping negative
/// eigenvalues. No-op (flag untouched) if the matrix is already PSD.
inline KernelMatrix psd_repair(const KernelMatrix& k) {
    if ((k.values - k.values.transpose()).cwiseAbs().maxCoeff() > kKernelSymTol)
        throw std::invalid_argument("psd_repair: kernel matrix not symmetric");

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(k.values);
    if (es.eigenvalues().minCoeff() >= -kPsdRepairTol) return k;

    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    RealMatrix repaired = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    repaired = ((repaired + repaired.transpose()) / 2.0).eval();

    KernelMatrix out = k;
    out.values = std::move(repaired);
    out.psd_repaired = true;
    return out;
}

inline double dual_objective(const KernelMatrix& k, const std::vector<int>& labels,
                             const RealVector& beta) {
    double obj = beta.sum();
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        for (Eigen::Index j = 0; j < beta.size(); ++j)
            obj -= 0.5 * labels[i] * labels[j] * beta(i) * beta(j) * k.values(i, j);
    return obj;
}

/// SMO solver for the box-constrained SVM dual:
/// max sum(beta) - 1/2 sum y_i y_j beta_i beta_j K_ij
/// s.t. sum beta_i y_i = 0, 0 <= beta_i <= C.
///
/// Working pair: maximal first-order KKT violation, ties to the lowest index.
/// Stops when the violation drops below kSmoKktTol or after
/// kSmoMaxPairUpdates pair updates.
inline SvmModel svm_train(const KernelMatrix& k, const std::vector<int>& labels, double c,
                          std::vector<FeatureVector> points = {}) {
    const Eigen::Index n = k.size();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw std::invalid_argument("svm_train: label count does not match kernel size");
    if (c <= 0.0) throw std::invalid_argument("svm_train: C must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw std::invalid_argument("svm_train: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("svm_train: both classes must be present");
    if (!points.empty() && static_cast<Eigen::Index>(points.size()) != n)
        throw std::invalid_argument("svm_train: point count does not match kernel size");

    if (!k.psd_repaired) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(k.values, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdRepairTol)
            throw std::invalid_argument("svm_train: kernel not PSD; apply psd_repair first");
    }

    const RealMatrix& K = k.values;
    RealVector beta = RealVector::Zero(n);
    RealVector grad = RealVector::Zero(n);  // G_i = sum_j beta_j y_j K_ij
    const double bound_eps = 1e-10 * std::max(1.0, c);

    auto in_up = [&](Eigen::Index t) {
        return (labels[t] == 1 && beta(t) < c - bound_eps) ||
               (labels[t] == -1 && beta(t) > bound_eps);
    };
    auto in_low = [&](Eigen::Index t) {
        return (labels[t] == -1 && beta(t) < c - bound_eps) ||
               (labels[t] == 1 && beta(t) > bound_eps);
    };

    bool converged = false;
    for (long long iter = 0; iter < kSmoMaxPairUpdates; ++iter) {
        // Maximal violating pair over F_t = y_t - G_t.
        Eigen::Index i = -1, j = -1;
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double f = labels[t] - grad(t);
            if (in_up(t) && f > m_up) { m_up = f; i = t; }
            if (in_low(t) && f < m_low) { m_low = f; j = t; }
        }
        if (i < 0 || j < 0 || m_up - m_low < kSmoKktTol) {
            converged = true;
            break;
        }

        const double yi = labels[i], yj = labels[j];
        const double s = yi * yj;
        double low, high;  // bounds for the new beta_j
        if (s < 0.0) {
            low = std::max(0.0, beta(j) - beta(i));
            high = std::min(c, c + beta(j) - beta(i));
        } else {
            low = std::max(0.0, beta(i) + beta(j) - c);
            high = std::min(c, beta(i) + beta(j));
        }
        if (high - low < bound_eps) break;  // selected pair cannot move

        const double ei = grad(i) - yi;
        const double ej = grad(j) - yj;
        const double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);

        double bj_new;
        if (eta > 1e-12) {
            bj_new = std::clamp(beta(j) + yj * (ei - ej) / eta, low, high);
        } else {
            // Flat or concave direction: objective is linear along the pair
            // constraint, so the maximum sits at an endpoint.
            const double f1 = yi * ei - beta(i) * K(i, i) - s * beta(j) * K(i, j);
            const double f2 = yj * ej - beta(j) * K(j, j) - s * beta(i) * K(i, j);
            const double l1 = beta(i) + s * (beta(j) - low);
            const double h1 = beta(i) + s * (beta(j) - high);
            const double psi_l = l1 * f1 + low * f2 + 0.5 * l1 * l1 * K(i, i) +
                                 0.5 * low * low * K(j, j) + s * low * l1 * K(i, j);
            const double psi_h = h1 * f1 + high * f2 + 0.5 * h1 * h1 * K(i, i) +
                                 0.5 * high * high * K(j, j) + s * high * h1 * K(i, j);
            if (psi_l < psi_h - 1e-12) bj_new = low;
            else if (psi_h < psi_l - 1e-12) bj_new = high;
            else break;  // endpoints tie: no usable progress
        }

        const double dj = bj_new - beta(j);
        if (std::abs(dj) < 1e-14 * std::max(1.0, c)) break;  // numerical stall
        const double bi_new = std::clamp(beta(i) + s * (beta(j) - bj_new), 0.0, c);
        const double di = bi_new - beta(i);

        grad += di * yi * K.col(i) + dj * yj * K.col(j);
        beta(i) = bi_new;
        beta(j) = bj_new;
    }

    // Bias from free support vectors; midpoint of the KKT interval otherwise.
    const double free_eps = 1e-8 * std::max(1.0, c);
    double bias_sum = 0.0;
    int n_free = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (beta(t) > free_eps && beta(t) < c - free_eps) {
            bias_sum += labels[t] - grad(t);
            ++n_free;
        }
    }
    double bias;
    if (n_free > 0) {
        bias = bias_sum / n_free;
    } else {
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double f = labels[t] - grad(t);
            if (in_up(t)) m_up = std::max(m_up, f);
            if (in_low(t)) m_low = std::min(m_low, f);
        }
        bias = (std::isfinite(m_up) && std::isfinite(m_low)) ? (m_up + m_low) / 2.0 : 0.0;
    }

    return {std::move(beta), bias, labels, std::move(points), c, converged};
}

/// Raw decision margin sum_i beta_i y_i K(x, x_i) + b.
inline double svm_decision(const SvmModel& model, const RealVector& kernel_row) {
    if (kernel_row.size() != model.beta.size())
        throw std::invalid_argument("svm_decision: kernel row length mismatch");
    double m = model.bias;
    for (Eigen::Index i = 0; i < model.beta.size(); ++i)
        m += model.beta(i) * model.labels[i] * kernel_row(i);
    return m;
}

inline std::vector<double> decision_margins(const SvmModel& model, const RealMatrix& rows) {
    std::vector<double> out;
    out.reserve(rows.rows());
    for (Eigen::Index t = 0; t < rows.rows(); ++t)
        out.push_back(svm_decision(model, rows.row(t).transpose()));
    return out;
}

/// Labels for test points, kernel rows evaluated through the engine.
inline std::vector<int> predict(const SvmModel& model, const std::vector<FeatureVector>& test_points,
                                const Dqc1Config& cfg, const FeatureMapConfig& fm) {
    if (model.points.empty())
        throw std::invalid_argument("predict: model carries no training points");
    const RealMatrix rows = build_kernel_rows(test_points, model.points, cfg, fm);
    std::vector<int> out;
    out.reserve(test_points.size());
    for (Eigen::Index t = 0; t < rows.rows(); ++t)
        out.push_back(svm_decision(model, rows.row(t).transpose()) >= 0.0 ? 1 : -1);
    return out;
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("accuracy: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("accuracy: empty inputs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace dqc1
