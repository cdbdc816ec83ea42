#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "dqc1/linalg.hpp"
#include "dqc1/rng.hpp"

namespace dqc1 {

enum class SamplingMode { exact, shots };

struct Dqc1Config {
    int n_target_qubits = 2;
    double alpha = 1.0;
    SamplingMode mode = SamplingMode::exact;
    long long shots = 8192;
    std::uint64_t seed = 0;
    double depolarizing_p = 0.0;  // 0 disables the channel

    void validate() const {
        if (n_target_qubits < 1)
            throw std::invalid_argument("Dqc1Config: n_target_qubits must be >= 1");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("Dqc1Config: alpha outside [0, 1]");
        if (mode == SamplingMode::shots && shots < 1)
            throw std::invalid_argument("Dqc1Config: shots must be >= 1");
        if (!(depolarizing_p >= 0.0 && depolarizing_p <= 1.0))
            throw std::invalid_argument("Dqc1Config: depolarizing_p outside [0, 1]");
    }

    Eigen::Index target_dim() const { return Eigen::Index(1) << n_target_qubits; }
};

/// Final 2x2 control-qubit state; the off-diagonal carries alpha * tr(U) / 2^n.
struct ControlQubitState {
    DensityMatrix state;
    double alpha;

    Complex off_diagonal() const { return state.mat()(1, 0); }
};

struct TraceEstimate {
    Complex value;  // estimate of tr(U) / 2^n
    double std_error = 0.0;
    SamplingMode mode = SamplingMode::exact;
    long long shots_used = 0;
};

/// Control qubit (I + alpha Z) / 2 = diag((1+alpha)/2, (1-alpha)/2).
inline DensityMatrix prepare_control(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("prepare_control: alpha outside [0, 1]");
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = (1.0 + alpha) / 2.0;
    m(1, 1) = (1.0 - alpha) / 2.0;
    return DensityMatrix(std::move(m));
}

/// Maximally mixed n-qubit register built the circuit way: n Bell pairs on
/// 2n qubits, ancillas traced out. Qubit order (t0, a0, t1, a1, ...).
inline DensityMatrix prepare_target_mixed_via_ancilla(int n) {
    if (n < 1) throw std::invalid_argument("prepare_target_mixed_via_ancilla: n must be >= 1");
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;

    ComplexMatrix joint = bell;
    for (int k = 1; k < n; ++k) joint = tensor_product(joint, bell);

    std::vector<Eigen::Index> dims(2 * static_cast<std::size_t>(n), 2);
    std::vector<std::size_t> keep;
    for (int k = 0; k < n; ++k) keep.push_back(2 * static_cast<std::size_t>(k));
    return partial_trace(DensityMatrix(std::move(joint)), dims, keep);
}

/// |0><0| ⊗ I + |1><1| ⊗ U.
inline UnitaryMatrix controlled_unitary(const UnitaryMatrix& u) {
    const Eigen::Index d = u.dim();
    ComplexMatrix c = ComplexMatrix::Zero(2 * d, 2 * d);
    c.topLeftCorner(d, d) = ComplexMatrix::Identity(d, d);
    c.bottomRightCorner(d, d) = u.mat();
    return UnitaryMatrix(std::move(c));
}

namespace detail {

inline ControlQubitState make_control_state(ComplexMatrix m, double alpha) {
    ControlQubitState out{DensityMatrix(std::move(m)), alpha};
    if (std::abs(out.state.mat()(0, 0).real() - 0.5) > 1e-9 ||
        std::abs(out.state.mat()(1, 1).real() - 0.5) > 1e-9)
        throw std::logic_error("ControlQubitState: diagonal deviates from 1/2");
    if (std::abs(out.off_diagonal()) > alpha / 2.0 + 1e-9)
        throw std::logic_error("ControlQubitState: off-diagonal exceeds alpha/2");
    return out;
}

}  // namespace detail

/// Closed-form control-qubit output: 1/2 [[1, a tr(U†)/2^n], [a tr(U)/2^n, 1]].
inline ControlQubitState run_exact(const UnitaryMatrix& u, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("run_exact: alpha outside [0, 1]");
    const Complex k = u.trace() / static_cast<double>(u.dim());
    ComplexMatrix m(2, 2);
    m(0, 0) = m(1, 1) = 0.5;
    m(1, 0) = 0.5 * alpha * k;
    m(0, 1) = 0.5 * alpha * std::conj(k);
    return detail::make_control_state(std::move(m), alpha);
}

/// Same output computed the long way: Hadamard on the control, controlled-U on
/// control ⊗ maximally mixed register, targets traced out.
inline ControlQubitState run_full_register(const UnitaryMatrix& u, double alpha) {
    const Eigen::Index d = u.dim();
    if (!is_power_of_two(d))
        throw std::invalid_argument("run_full_register: unitary dim must be a power of 2");

    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;

    const ComplexMatrix target = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    ComplexMatrix rho = tensor_product(prepare_control(alpha).mat(), target);
    const ComplexMatrix hc = tensor_product(h, ComplexMatrix::Identity(d, d));
    rho = hc * rho * hc.adjoint();
    const ComplexMatrix cu = controlled_unitary(u).mat();
    rho = cu * rho * cu.adjoint();

    DensityMatrix reduced = partial_trace(DensityMatrix(std::move(rho)), {2, d}, {0});
    return detail::make_control_state(reduced.mat(), alpha);
}

/// (1 - p) rho + p I / dim.
inline DensityMatrix apply_depolarizing(const DensityMatrix& rho, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("apply_depolarizing: p outside [0, 1]");
    const Eigen::Index d = rho.dim();
    ComplexMatrix m = (1.0 - p) * rho.mat() +
                      (p / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
    return DensityMatrix(std::move(m));
}

namespace detail {

/// X/Y expectation values of the measured (possibly depolarized) control qubit.
struct ControlReadout {
    double ex;
    double ey;
};

inline ControlReadout control_expectations(const UnitaryMatrix& u, const Dqc1Config& cfg) {
    const Complex k = u.trace() / static_cast<double>(u.dim());
    const double damp = 1.0 - cfg.depolarizing_p;
    return {damp * cfg.alpha * k.real(), damp * cfg.alpha * k.imag()};
}

/// One sampled expectation value from `shots` single-qubit measurements.
inline double sample_expectation(double mean, long long shots, Prng& rng) {
    const double p_plus = (1.0 + mean) / 2.0;
    const long long plus = rng.bernoulli_count(shots, p_plus);
    return 2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0;
}

}  // namespace detail

/// Estimates tr(U)/2^n. Exact mode returns the trace exactly; shots mode
/// samples X and Y control measurements and divides by alpha.
inline TraceEstimate estimate_trace(const UnitaryMatrix& u, const Dqc1Config& cfg,
                                    std::optional<std::uint64_t> stream_seed = std::nullopt) {
    cfg.validate();
    if (u.dim() != cfg.target_dim())
        throw std::invalid_argument("estimate_trace: unitary dim does not match n_target_qubits");

    if (cfg.mode == SamplingMode::exact)
        return {u.trace() / static_cast<double>(u.dim()), 0.0, SamplingMode::exact, 0};

    if (cfg.alpha == 0.0)
        throw std::runtime_error("estimate_trace: trace unrecoverable at zero polarization");

    const auto [ex, ey] = detail::control_expectations(u, cfg);
    Prng rng(stream_seed.value_or(cfg.seed));
    const double xh = detail::sample_expectation(ex, cfg.shots, rng);
    const double yh = detail::sample_expectation(ey, cfg.shots, rng);
    const double se = std::sqrt((1.0 - xh * xh) / static_cast<double>(cfg.shots) +
                                (1.0 - yh * yh) / static_cast<double>(cfg.shots)) /
                      cfg.alpha;
    return {Complex(xh, yh) / cfg.alpha, se, SamplingMode::shots, cfg.shots};
}

/// Raw off-diagonal magnitude alpha (1-p) |tr(U)| / 2^n, without the alpha
/// normalization; this is the signal the alpha-sweep classifier consumes.
/// Clamped to [0, 1].
inline double estimate_kernel_raw(const UnitaryMatrix& u, const Dqc1Config& cfg,
                                  std::optional<std::uint64_t> stream_seed = std::nullopt) {
    cfg.validate();
    if (u.dim() != cfg.target_dim())
        throw std::invalid_argument("estimate_kernel_raw: unitary dim does not match n_target_qubits");

    const auto [ex, ey] = detail::control_expectations(u, cfg);
    double mag;
    if (cfg.mode == SamplingMode::exact) {
        mag = std::hypot(ex, ey);
    } else {
        Prng rng(stream_seed.value_or(cfg.seed));
        const double xh = detail::sample_expectation(ex, cfg.shots, rng);
        const double yh = detail::sample_expectation(ey, cfg.shots, rng);
        mag = std::hypot(xh, yh);
    }
    return std::clamp(mag, 0.0, 1.0);
}

}  // namespace dqc1
