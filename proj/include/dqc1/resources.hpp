#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dqc1/engine.hpp"
#include "dqc1/entropy.hpp"
#include "dqc1/feature_map.hpp"

namespace dqc1 {

// Salts for the independent per-pair measurement streams.
inline constexpr std::uint64_t kKernelStreamSalt = 0;
inline constexpr std::uint64_t kSquaredStreamSalt = 1;

struct ResourceRecord {
    int i;
    int j;
    double kernel_abs;         // alpha-scaled kernel estimate, in [0, 1]
    double delta_coherence;    // bits
    double geometric_discord;
    bool bound_satisfied;      // geometric_discord <= delta_coherence + 1e-12
};

inline constexpr double kBoundTol = 1e-12;

/// Coherence consumed by one DQC1 run:
/// H2((1 - alpha t)/2) - H2((1 - alpha)/2) with t = |tr(U)| / 2^n.
inline double coherence_consumption(double trace_abs, double alpha, int n) {
    if (!(trace_abs >= 0.0 && trace_abs <= 1.0))
        throw std::invalid_argument("coherence_consumption: trace_abs outside [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("coherence_consumption: alpha outside [0, 1]");
    if (n < 1) throw std::invalid_argument("coherence_consumption: n must be >= 1");
    const double dc =
        binary_entropy((1.0 - alpha * trace_abs) / 2.0) - binary_entropy((1.0 - alpha) / 2.0);
    return dc < 0.0 ? 0.0 : dc;
}

/// Geometric discord of the DQC1 output:
/// (alpha/2)^2 (1/2^n) (1 - |tr(U^2)| / 2^n).
inline double geometric_discord_closed_form(double trace_u_squared_abs, double alpha, int n) {
    if (!(trace_u_squared_abs >= 0.0 && trace_u_squared_abs <= 1.0))
        throw std::invalid_argument("geometric_discord_closed_form: trace outside [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("geometric_discord_closed_form: alpha outside [0, 1]");
    if (n < 1) throw std::invalid_argument("geometric_discord_closed_form: n must be >= 1");
    const double dim = static_cast<double>(Eigen::Index(1) << n);
    return (alpha / 2.0) * (alpha / 2.0) * (1.0 / dim) * (1.0 - trace_u_squared_abs);
}

/// tr(U^2)/2^n through the engine; U^2 is what two successive controlled-U
/// applications implement.
inline TraceEstimate trace_u_squared(const UnitaryMatrix& u, const Dqc1Config& cfg,
                                     std::optional<std::uint64_t> stream_seed = std::nullopt) {
    return estimate_trace(UnitaryMatrix(u.mat() * u.mat()), cfg, stream_seed);
}

/// Per-pair coherence/discord records for a dataset, one per ordered pair
/// i <= j. Kernel estimates share the classifier's measurement streams.
inline std::vector<ResourceRecord> resource_map(const std::vector<FeatureVector>& dataset,
                                                const Dqc1Config& cfg,
                                                const FeatureMapConfig& fm) {
    if (dataset.empty()) throw std::invalid_argument("resource_map: empty dataset");
    cfg.validate();
    fm.validate();

    std::vector<UnitaryMatrix> enc;
    enc.reserve(dataset.size());
    for (const auto& x : dataset) enc.push_back(encoding_unitary(x, fm));

    const int n = cfg.n_target_qubits;
    std::vector<ResourceRecord> records;
    records.reserve(dataset.size() * (dataset.size() + 1) / 2);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t j = i; j < dataset.size(); ++j) {
            const UnitaryMatrix u(enc[i].mat() * enc[j].mat().adjoint());
            const double raw =
                estimate_kernel_raw(u, cfg, pair_seed(cfg.seed, i, j, kKernelStreamSalt));

            // Delta C consumes alpha * t directly, so the classifier's raw
            // estimate is used as-is (clamped into the physical range).
            const double alpha_t = std::clamp(raw, 0.0, cfg.alpha);
            const double dc = binary_entropy((1.0 - alpha_t) / 2.0) -
                              binary_entropy((1.0 - cfg.alpha) / 2.0);

            const TraceEstimate t2 =
                trace_u_squared(u, cfg, pair_seed(cfg.seed, i, j, kSquaredStreamSalt));
            const double t2_abs = std::clamp(std::abs(t2.value), 0.0, 1.0);
            const double dg = geometric_discord_closed_form(t2_abs, cfg.alpha, n);

            records.push_back({static_cast<int>(i), static_cast<int>(j), raw,
                               dc < 0.0 ? 0.0 : dc, dg, dg <= dc + kBoundTol});
        }
    }
    return records;
}

}  // namespace dqc1
