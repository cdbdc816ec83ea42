#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dqc1/feature_map.hpp"
#include "dqc1/rng.hpp"

namespace dqc1 {

/// Affine per-feature map applied when squeezing generated data into the
/// encoding domain; kept with the dataset so the raw coordinates stay
/// recoverable.
struct RescaleInfo {
    std::array<double, 2> src_min;
    std::array<double, 2> src_max;
    double dst_lo = 0.0;
    double dst_hi = 1.0;
};

struct LabeledDataset {
    std::vector<FeatureVector> points;
    std::vector<int> labels;  // +1 / -1
    std::string name;
    std::uint64_t seed = 0;
    std::optional<RescaleInfo> rescale;

    std::size_t size() const { return points.size(); }
};

struct SplitSpec {
    int train_per_label = 20;
    int test_per_label = 5;
    std::uint64_t seed = 0;

    void validate() const {
        if (train_per_label < 1 || test_per_label < 1)
            throw std::invalid_argument("SplitSpec: counts must be >= 1");
    }
};

inline constexpr double kDefaultAdhocGap = 0.3;
inline constexpr long long kAdhocMaxDraws = 1'000'000;
// Calibrated defaults for the synthetic benchmark generators.
inline constexpr double kDefaultMoonsNoise = 0.2;
inline constexpr double kDefaultCirclesNoise = 0.17;
inline constexpr double kDefaultCirclesFactor = 0.5;
inline constexpr double kDefaultFeatureScale = 1.0;

namespace detail {

inline RescaleInfo rescale_in_place(std::vector<FeatureVector>& pts, double scale) {
    RescaleInfo info;
    info.dst_lo = 0.0;
    info.dst_hi = scale;
    for (int f = 0; f < 2; ++f) {
        double lo = pts.front()[f], hi = pts.front()[f];
        for (const auto& p : pts) {
            lo = std::min(lo, p[f]);
            hi = std::max(hi, p[f]);
        }
        info.src_min[f] = lo;
        info.src_max[f] = hi;
        const double span = hi - lo;
        for (auto& p : pts) p[f] = span > 0.0 ? (p[f] - lo) / span * scale : 0.0;
    }
    return info;
}

}  // namespace detail

/// Gap-separated dataset in the encoding feature space: points are labeled by
/// the sign of <phi(x)| V†(Z⊗Z)V |phi(x)> with |phi(x)> = u^l(x)|00> and a
/// seeded Haar-random V; points inside the gap band are rejected.
inline std::pair<LabeledDataset, LabeledDataset> gen_adhoc(const SplitSpec& spec,
                                                           double gap,
                                                           const FeatureMapConfig& fm) {
    spec.validate();
    fm.validate();
    if (!(gap > 0.0)) throw std::invalid_argument("gen_adhoc: gap must be positive");

    Prng rng(spec.seed);
    const UnitaryMatrix v = random_unitary(4, rng);
    ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
    zz(0, 0) = 1.0; zz(1, 1) = -1.0; zz(2, 2) = -1.0; zz(3, 3) = 1.0;
    const ComplexMatrix observable = v.mat().adjoint() * zz * v.mat();

    LabeledDataset train{{}, {}, "adhoc", spec.seed, std::nullopt};
    LabeledDataset test{{}, {}, "adhoc", spec.seed, std::nullopt};
    int train_need[2] = {spec.train_per_label, spec.train_per_label};
    int test_need[2] = {spec.test_per_label, spec.test_per_label};

    for (long long draws = 0; draws < kAdhocMaxDraws; ++draws) {
        const FeatureVector x{rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)};
        const Eigen::VectorXcd phi = encoding_unitary(x, fm).mat().col(0);
        const double m = (phi.adjoint() * observable * phi)(0).real();
        if (std::abs(m) < gap) continue;
        const int label = m > 0.0 ? 1 : -1;
        const int b = label > 0 ? 0 : 1;
        if (train_need[b] > 0) {
            train.points.push_back(x);
            train.labels.push_back(label);
            --train_need[b];
        } else if (test_need[b] > 0) {
            test.points.push_back(x);
            test.labels.push_back(label);
            --test_need[b];
        }
        if (train_need[0] + train_need[1] + test_need[0] + test_need[1] == 0)
            return {std::move(train), std::move(test)};
    }
    throw std::runtime_error("gen_adhoc: rejection sampling exceeded 1000000 draws");
}

/// Two interleaved half circles with Gaussian noise, min-max rescaled into
/// [0, feature_scale].
inline LabeledDataset gen_moons(int n_total, double noise_std, std::uint64_t seed,
                                double feature_scale = kDefaultFeatureScale) {
    if (n_total < 2 || n_total % 2 != 0)
        throw std::invalid_argument("gen_moons: n_total must be even and >= 2");
    if (noise_std < 0.0) throw std::invalid_argument("gen_moons: noise_std must be >= 0");
    if (!(feature_scale > 0.0 && feature_scale < 2.0 * M_PI))
        throw std::invalid_argument("gen_moons: feature_scale outside (0, 2pi)");

    const int half = n_total / 2;
    LabeledDataset ds{{}, {}, "moons", seed, std::nullopt};
    ds.points.reserve(n_total);
    for (int i = 0; i < half; ++i) {
        const double t = M_PI * i / (half - 1 > 0 ? half - 1 : 1);
        ds.points.push_back({std::cos(t), std::sin(t)});
        ds.labels.push_back(1);
    }
    for (int i = 0; i < half; ++i) {
        const double t = M_PI * i / (half - 1 > 0 ? half - 1 : 1);
        ds.points.push_back({1.0 - std::cos(t), 1.0 - std::sin(t) - 0.5});
        ds.labels.push_back(-1);
    }
    Prng rng(seed);
    for (auto& p : ds.points) {
        p[0] += noise_std * rng.normal();
        p[1] += noise_std * rng.normal();
    }
    ds.rescale = detail::rescale_in_place(ds.points, feature_scale);
    return ds;
}

/// Two concentric circles (inner radius = factor) with Gaussian noise,
/// rescaled like gen_moons.
inline LabeledDataset gen_circles(int n_total, double factor, double noise_std,
                                  std::uint64_t seed,
                                  double feature_scale = kDefaultFeatureScale) {
    if (n_total < 2 || n_total % 2 != 0)
        throw std::invalid_argument("gen_circles: n_total must be even and >= 2");
    if (!(factor > 0.0 && factor < 1.0))
        throw std::invalid_argument("gen_circles: factor outside (0, 1)");
    if (noise_std < 0.0) throw std::invalid_argument("gen_circles: noise_std must be >= 0");
    if (!(feature_scale > 0.0 && feature_scale < 2.0 * M_PI))
        throw std::invalid_argument("gen_circles: feature_scale outside (0, 2pi)");

    const int half = n_total / 2;
    LabeledDataset ds{{}, {}, "circles", seed, std::nullopt};
    ds.points.reserve(n_total);
    for (int i = 0; i < half; ++i) {
        const double t = 2.0 * M_PI * i / half;
        ds.points.push_back({std::cos(t), std::sin(t)});
        ds.labels.push_back(1);
    }
    for (int i = 0; i < half; ++i) {
        const double t = 2.0 * M_PI * i / half;
        ds.points.push_back({factor * std::cos(t), factor * std::sin(t)});
        ds.labels.push_back(-1);
    }
    Prng rng(seed);
    for (auto& p : ds.points) {
        p[0] += noise_std * rng.normal();
        p[1] += noise_std * rng.normal();
    }
    ds.rescale = detail::rescale_in_place(ds.points, feature_scale);
    return ds;
}

/// Stratified shuffle split with equal per-label counts in both parts.
inline std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                                  int n_train_total,
                                                                  int n_test_total,
                                                                  std::uint64_t seed) {
    if (n_train_total < 2 || n_test_total < 2 || n_train_total % 2 || n_test_total % 2)
        throw std::invalid_argument("split_train_test: totals must be even and >= 2");

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.size(); ++i) (ds.labels[i] == 1 ? pos : neg).push_back(i);
    const int tr_half = n_train_total / 2, te_half = n_test_total / 2;
    if (pos.size() < static_cast<std::size_t>(tr_half + te_half) ||
        neg.size() < static_cast<std::size_t>(tr_half + te_half))
        throw std::invalid_argument("split_train_test: not enough points per label");

    Prng rng(splitmix64(seed ^ 0x5E21AF5237C1D6B1ULL));
    auto shuffle = [&](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform() * i)]);
    };
    shuffle(pos);
    shuffle(neg);

    LabeledDataset train{{}, {}, ds.name, seed, ds.rescale};
    LabeledDataset test{{}, {}, ds.name, seed, ds.rescale};
    auto take = [&](const std::vector<std::size_t>& src, int from, int count, LabeledDataset& dst) {
        for (int k = 0; k < count; ++k) {
            dst.points.push_back(ds.points[src[from + k]]);
            dst.labels.push_back(ds.labels[src[from + k]]);
        }
    };
    take(pos, 0, tr_half, train);
    take(neg, 0, tr_half, train);
    take(pos, tr_half, te_half, test);
    take(neg, tr_half, te_half, test);
    return {std::move(train), std::move(test)};
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// CSV with header `x1,x2,label`; features at 17 significant digits so the
/// round trip is lossless.
inline void save_dataset(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
    out << "x1,x2,label\n";
    for (std::size_t i = 0; i < ds.size(); ++i)
        out << detail::format_g17(ds.points[i][0]) << ',' << detail::format_g17(ds.points[i][1])
            << ',' << ds.labels[i] << '\n';
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path);
}

inline LabeledDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path);

    LabeledDataset ds{{}, {}, path, 0, std::nullopt};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "x1,x2,label")
                throw std::runtime_error("load_dataset: bad header at line 1 in " + path);
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string fx1, fx2, flab;
        if (!std::getline(ss, fx1, ',') || !std::getline(ss, fx2, ',') || !std::getline(ss, flab))
            throw std::runtime_error("load_dataset: malformed row at line " +
                                     std::to_string(line_no) + " in " + path);
        try {
            const FeatureVector x{std::stod(fx1), std::stod(fx2)};
            validate_feature(x);
            const int lab = std::stoi(flab);
            if (lab != 1 && lab != -1)
                throw std::invalid_argument("label must be +1 or -1");
            ds.points.push_back(x);
            ds.labels.push_back(lab);
        } catch (const std::exception& e) {
            throw std::runtime_error("load_dataset: parse error at line " +
                                     std::to_string(line_no) + " in " + path + ": " + e.what());
        }
    }
    if (ds.points.empty()) throw std::runtime_error("load_dataset: empty dataset in " + path);
    return ds;
}

}  // namespace dqc1
