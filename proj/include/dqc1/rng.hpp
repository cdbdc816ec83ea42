#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dqc1/linalg.hpp"

namespace dqc1 {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream seed for the (i, j) work item under a root seed. Distinct salts give
/// independent streams for the same pair (e.g. kernel vs squared-unitary runs).
inline std::uint64_t pair_seed(std::uint64_t root, std::uint64_t i, std::uint64_t j,
                               std::uint64_t salt = 0) {
    std::uint64_t h = splitmix64(root ^ 0xD1B54A32D192ED03ULL);
    h = splitmix64(h ^ (i + 0x8CB92BA72F3D8DD7ULL));
    h = splitmix64(h ^ (j + 0xABCC5167CCAD925FULL));
    return splitmix64(h ^ salt);
}

/// mt19937_64 wrapper with explicit uniform/normal conversions so streams are
/// identical across standard-library implementations.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Count of successes in `n` Bernoulli(p) trials.
    long long bernoulli_count(long long n, double p) {
        long long c = 0;
        for (long long k = 0; k < n; ++k)
            if (uniform() < p) ++c;
        return c;
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal
/// phases folded back into Q.
inline UnitaryMatrix random_unitary(Eigen::Index dim, Prng& rng) {
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0);
    }
    return UnitaryMatrix(std::move(q));
}

}  // namespace dqc1
