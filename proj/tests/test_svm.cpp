#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "dqc1/rng.hpp"
#include "dqc1/svm.hpp"

using namespace dqc1;
using Catch::Approx;

namespace {

double dual_value(const RealMatrix& k, const std::vector<int>& y, const RealVector& beta) {
    double obj = beta.sum();
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        for (Eigen::Index j = 0; j < beta.size(); ++j)
            obj -= 0.5 * y[i] * y[j] * beta(i) * beta(j) * k(i, j);
    return obj;
}

// Brute-force maximizer of the dual over the balance-constrained box, on a
// lattice refined in three stages around the running best. The lattice keeps
// sum(beta_i y_i) = 0 exact in integer arithmetic.
double grid_qp_oracle(const RealMatrix& k, const std::vector<int>& y, double c,
                      RealVector* best_beta = nullptr) {
    const int n = static_cast<int>(k.rows());
    RealVector center = RealVector::Zero(n);
    double best = -1e300;
    RealVector best_b = center;

    const int kStage1Steps = 20;
    double h = c / kStage1Steps;
    for (int stage = 0; stage < 3; ++stage) {
        const int lo = stage == 0 ? 0 : -20;
        const int hi = stage == 0 ? kStage1Steps : 20;
        std::vector<int> kidx(n, lo);
        std::function<void(int, int)> scan = [&](int pos, int balance) {
            if (pos == n) {
                if (balance != 0) return;
                RealVector beta(n);
                for (int i = 0; i < n; ++i) {
                    beta(i) = center(i) + kidx[i] * h;
                    if (beta(i) < -1e-12 || beta(i) > c + 1e-12) return;
                    beta(i) = std::clamp(beta(i), 0.0, c);
                }
                const double v = dual_value(k, y, beta);
                if (v > best) {
                    best = v;
                    best_b = beta;
                }
                return;
            }
            for (int step = lo; step <= hi; ++step) {
                kidx[pos] = step;
                // Prune boxes early.
                const double b = center(pos) + step * h;
                if (b < -1e-12 || b > c + 1e-12) continue;
                scan(pos + 1, balance + step * y[pos]);
            }
        };
        scan(0, 0);
        center = best_b;
        h /= 10.0;
    }
    if (best_beta) *best_beta = best_b;
    return best;
}

void check_feasible(const SvmModel& m, const std::vector<int>& y, double c) {
    double balance = 0.0;
    for (Eigen::Index i = 0; i < m.beta.size(); ++i) {
        REQUIRE(m.beta(i) >= -1e-12);
        REQUIRE(m.beta(i) <= c + 1e-12);
        balance += m.beta(i) * y[i];
    }
    REQUIRE(std::abs(balance) < 1e-6);
}

void check_kkt(const KernelMatrix& k, const SvmModel& m, double tol) {
    for (Eigen::Index i = 0; i < m.beta.size(); ++i) {
        const double margin = m.labels[i] * svm_decision(m, k.values.row(i).transpose());
        const double free_eps = 1e-6 * std::max(1.0, m.c);
        if (m.beta(i) > free_eps && m.beta(i) < m.c - free_eps) {
            REQUIRE(margin == Approx(1.0).margin(tol));
        } else if (m.beta(i) <= free_eps) {
            REQUIRE(margin >= 1.0 - tol);
        } else {
            REQUIRE(margin <= 1.0 + tol);
        }
    }
}

KernelMatrix gaussian_kernel(const std::vector<FeatureVector>& pts, double gamma) {
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    RealMatrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
            k(i, j) = std::exp(-gamma * (dx * dx + dy * dy));
        }
    return {std::move(k), SamplingMode::exact, 1.0, false};
}

}  // namespace

TEST_CASE("psd repair leaves PSD matrices untouched") {
    KernelMatrix id{RealMatrix::Identity(3, 3), SamplingMode::exact, 1.0, false};
    const KernelMatrix out = psd_repair(id);
    REQUIRE_FALSE(out.psd_repaired);
    REQUIRE((out.values - id.values).cwiseAbs().maxCoeff() == 0.0);

    RealMatrix dom(2, 2);
    dom << 2.0, 0.5, 0.5, 2.0;
    REQUIRE_FALSE(psd_repair({dom, SamplingMode::exact, 1.0, false}).psd_repaired);
}

TEST_CASE("psd repair clips the negative eigenvalue of a known matrix") {
    RealMatrix m(2, 2);
    m << 1.0, 1.2, 1.2, 1.0;  // eigenvalues 2.2 and -0.2
    const KernelMatrix out = psd_repair({m, SamplingMode::exact, 1.0, false});
    REQUIRE(out.psd_repaired);
    RealMatrix expect(2, 2);
    expect << 1.1, 1.1, 1.1, 1.1;
    REQUIRE((out.values - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd repair rejects asymmetric input") {
    RealMatrix m(2, 2);
    m << 1.0, 0.5, 0.2, 1.0;
    REQUIRE_THROWS_AS(psd_repair({m, SamplingMode::exact, 1.0, false}), std::invalid_argument);
}

TEST_CASE("two-point problem has the closed-form solution") {
    KernelMatrix k{RealMatrix::Identity(2, 2), SamplingMode::exact, 1.0, false};
    const std::vector<int> y{1, -1};
    const SvmModel m = svm_train(k, y, 10.0);

    REQUIRE(m.beta(0) == Approx(1.0).margin(1e-3));
    REQUIRE(m.beta(1) == Approx(1.0).margin(1e-3));
    REQUIRE(m.bias == Approx(0.0).margin(1e-3));
    REQUIRE(dual_objective(k, y, m.beta) == Approx(1.0).margin(1e-4));
    REQUIRE(dual_objective(k, y, m.beta) == Approx(grid_qp_oracle(k.values, y, 10.0)).margin(1e-3));

    // Free support vector sits exactly on its margin.
    const double margin0 = svm_decision(m, k.values.row(0).transpose());
    REQUIRE(y[0] * margin0 == Approx(1.0).margin(1e-3));
}

TEST_CASE("four-point separable toy matches the grid oracle") {
    const std::vector<FeatureVector> pts{{0.0, 0.0}, {0.1, 0.3}, {2.0, 2.0}, {2.2, 1.9}};
    const std::vector<int> y{1, 1, -1, -1};
    const KernelMatrix k = gaussian_kernel(pts, 0.8);
    for (double c : {1.0, 5.0}) {
        const SvmModel m = svm_train(k, y, c);
        REQUIRE(m.converged);
        check_feasible(m, y, c);
        check_kkt(k, m, 1e-3);
        const double oracle = grid_qp_oracle(k.values, y, c);
        REQUIRE(dual_objective(k, y, m.beta) == Approx(oracle).margin(1e-3));
    }
}

TEST_CASE("conflicting duplicate points saturate at the box") {
    RealMatrix km(2, 2);
    km << 1.0, 1.0, 1.0, 1.0;
    const std::vector<int> y{1, -1};
    const double c = 0.5;
    const SvmModel m = svm_train({km, SamplingMode::exact, 1.0, false}, y, c);
    REQUIRE(m.beta(0) == Approx(c).margin(1e-9));
    REQUIRE(m.beta(1) == Approx(c).margin(1e-9));
}

TEST_CASE("training input validation") {
    KernelMatrix k{RealMatrix::Identity(2, 2), SamplingMode::exact, 1.0, false};
    REQUIRE_THROWS_AS(svm_train(k, {1, 1}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(svm_train(k, {1, 0}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(svm_train(k, {1, -1, 1}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(svm_train(k, {1, -1}, -2.0), std::invalid_argument);

    RealMatrix indef(2, 2);
    indef << 1.0, 1.2, 1.2, 1.0;
    REQUIRE_THROWS_AS(svm_train({indef, SamplingMode::exact, 1.0, false}, {1, -1}, 1.0),
                      std::invalid_argument);
    REQUIRE_NOTHROW(svm_train(psd_repair({indef, SamplingMode::exact, 1.0, false}), {1, -1}, 1.0));
}

TEST_CASE("random small problems: SMO matches the grid oracle and KKT") {
    Prng rng(51);
    int checked = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
        std::vector<FeatureVector> pts;
        std::vector<int> y;
        bool pos = false, neg = false;
        for (int i = 0; i < n; ++i) {
            pts.push_back({rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)});
            y.push_back(rng.uniform() < 0.5 ? 1 : -1);
            (y.back() == 1 ? pos : neg) = true;
        }
        if (!pos || !neg) {
            y[0] = -y[1 % n];
            if (y[0] == y[1 % n]) y[0] = -y[0];
        }
        pos = neg = false;
        for (int v : y) (v == 1 ? pos : neg) = true;
        if (!pos || !neg) continue;

        const double c = rng.uniform() < 0.5 ? 1.0 : 4.0;
        const KernelMatrix k = gaussian_kernel(pts, 0.5 + rng.uniform());
        const SvmModel m = svm_train(k, y, c);
        check_feasible(m, y, c);
        check_kkt(k, m, 1e-3);

        const double oracle = grid_qp_oracle(k.values, y, c);
        const double smo = dual_objective(k, y, m.beta);
        REQUIRE(smo >= oracle - 1e-3);
        REQUIRE(smo == Approx(oracle).margin(1e-3));
        ++checked;
    }
    REQUIRE(checked >= 15);
}

TEST_CASE("decision function basics") {
    SvmModel m;
    m.beta = RealVector::Zero(2);
    m.bias = 0.3;
    m.labels = {1, -1};
    m.c = 1.0;
    RealVector row(2);
    row << 0.4, 0.9;
    REQUIRE(svm_decision(m, row) == Approx(0.3));

    RealVector bad(3);
    REQUIRE_THROWS_AS(svm_decision(m, bad), std::invalid_argument);
}

TEST_CASE("two-point model classifies its own support vectors") {
    KernelMatrix k{RealMatrix::Identity(2, 2), SamplingMode::exact, 1.0, false};
    const SvmModel m = svm_train(k, {1, -1}, 10.0);
    RealVector row(2);
    row << 1.0, 0.0;
    REQUIRE(svm_decision(m, row) > 0.0);
    row << 0.0, 1.0;
    REQUIRE(svm_decision(m, row) < 0.0);
}

TEST_CASE("exact kernel matrix has unit diagonal at alpha = 1 and zeros at alpha = 0") {
    Prng rng(52);
    std::vector<FeatureVector> pts;
    for (int i = 0; i < 5; ++i)
        pts.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});

    Dqc1Config cfg;
    const FeatureMapConfig fm{2, 2};
    const KernelMatrix k1 = build_kernel_matrix(pts, cfg, fm);
    for (Eigen::Index i = 0; i < k1.size(); ++i)
        REQUIRE(k1.values(i, i) == Approx(1.0).margin(1e-10));
    REQUIRE((k1.values - k1.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    cfg.alpha = 0.0;
    const KernelMatrix k0 = build_kernel_matrix(pts, cfg, fm);
    REQUIRE(k0.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernel matrix entries match the direct trace oracle") {
    Prng rng(53);
    std::vector<FeatureVector> pts;
    for (int i = 0; i < 3; ++i)
        pts.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});

    Dqc1Config cfg;
    cfg.alpha = 0.8;
    const FeatureMapConfig fm{2, 2};
    const KernelMatrix k = build_kernel_matrix(pts, cfg, fm);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const ComplexMatrix prod = encoding_unitary(pts[i], fm).mat() *
                                       encoding_unitary(pts[j], fm).mat().adjoint();
            REQUIRE(k.values(i, j) == Approx(0.8 * std::abs(prod.trace()) / 4.0).margin(1e-12));
        }
}

TEST_CASE("kernel construction is bitwise deterministic") {
    Prng rng(54);
    std::vector<FeatureVector> pts;
    for (int i = 0; i < 4; ++i)
        pts.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});

    for (SamplingMode mode : {SamplingMode::exact, SamplingMode::shots}) {
        Dqc1Config cfg;
        cfg.mode = mode;
        cfg.shots = 2048;
        cfg.seed = 99;
        const KernelMatrix a = build_kernel_matrix(pts, cfg, {2, 2});
        const KernelMatrix b = build_kernel_matrix(pts, cfg, {2, 2});
        REQUIRE(a.values == b.values);
    }
}

TEST_CASE("predict agrees with a row-by-row recomputation oracle") {
    Prng rng(55);
    std::vector<FeatureVector> train, test;
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) {
        train.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});
        labels.push_back(i % 2 ? 1 : -1);
    }
    for (int i = 0; i < 5; ++i)
        test.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});

    Dqc1Config cfg;
    const FeatureMapConfig fm{2, 2};
    const KernelMatrix k = psd_repair(build_kernel_matrix(train, cfg, fm));
    const SvmModel m = svm_train(k, labels, 100.0, train);

    const auto preds = predict(m, test, cfg, fm);
    const RealMatrix rows = build_kernel_rows(test, train, cfg, fm);
    for (Eigen::Index t = 0; t < rows.rows(); ++t) {
        const int expect = svm_decision(m, rows.row(t).transpose()) >= 0.0 ? 1 : -1;
        REQUIRE(preds[static_cast<std::size_t>(t)] == expect);
    }
}

TEST_CASE("alpha = 0 raw kernel yields a constant prediction") {
    std::vector<FeatureVector> train{{0.3, 0.4}, {1.0, 2.0}, {4.0, 5.0}, {5.5, 1.1}};
    std::vector<int> labels{1, -1, 1, -1};
    Dqc1Config cfg;
    cfg.alpha = 0.0;
    const FeatureMapConfig fm{2, 2};
    const KernelMatrix k = build_kernel_matrix(train, cfg, fm);
    const SvmModel m = svm_train(k, labels, 1000.0, train);

    std::vector<FeatureVector> test{{0.1, 0.1}, {2.0, 3.0}, {6.0, 0.2}};
    const RealMatrix rows = build_kernel_rows(test, train, cfg, fm);
    for (Eigen::Index t = 0; t < rows.rows(); ++t)
        REQUIRE(svm_decision(m, rows.row(t).transpose()) == Approx(m.bias));
    const auto preds = predict(m, test, cfg, fm);
    for (std::size_t t = 1; t < preds.size(); ++t) REQUIRE(preds[t] == preds[0]);
}

TEST_CASE("accuracy counting") {
    REQUIRE(accuracy({1, -1, 1}, {1, -1, 1}) == 1.0);
    REQUIRE(accuracy({1, 1}, {-1, -1}) == 0.0);
    REQUIRE(accuracy({1, 1, 1, 1, 1, 1, 1, 1, 1, -1}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}) ==
            Approx(0.9));
    REQUIRE_THROWS_AS(accuracy({1}, {1, -1}), std::invalid_argument);
}
