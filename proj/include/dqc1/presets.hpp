#pragma once

#include <array>
#include <cstdint>

namespace dqc1::presets {

// Frozen experiment definitions used by the `reproduce` subcommands and the
// acceptance suite. Seeds were fixed once against this implementation's RNG
// streams and are part of the reproducibility contract.

inline constexpr int kAdhocTrainPerLabel = 20;
inline constexpr int kAdhocTestPerLabel = 5;
inline constexpr std::array<std::uint64_t, 5> kAdhocSeeds{8, 14, 30, 42, 56};

inline constexpr double kDefaultSvmC = 1000.0;

// Qualitative hardware-like noise run: depolarizing strength, shot count, and
// the offset applied to the dataset seed for the measurement streams.
inline constexpr double kNoiseDemoP = 0.15;
inline constexpr long long kNoiseDemoShots = 1024;
inline constexpr std::uint64_t kNoiseDemoSeedOffset = 100;

// Synthetic benchmark split: 1000 points, 800 train / 200 test.
inline constexpr int kBenchmarkTotal = 1000;
inline constexpr int kBenchmarkTrain = 800;
inline constexpr int kBenchmarkTest = 200;
inline constexpr std::uint64_t kBenchmarkSeed = 7;

inline constexpr std::array<double, 11> kAlphaGridFine{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                                       0.6, 0.7, 0.8, 0.9, 1.0};
inline constexpr std::array<double, 7> kAlphaGridCoarse{0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0};

}  // namespace dqc1::presets
