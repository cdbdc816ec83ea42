#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dqc1/resources.hpp"
#include "dqc1/rng.hpp"

using namespace dqc1;
using Catch::Approx;

namespace {

ComplexMatrix phase_ladder() {
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    u(0, 0) = {1, 0};
    u(1, 1) = {0, 1};
    u(2, 2) = {-1, 0};
    u(3, 3) = {0, -1};
    return u;
}

std::vector<FeatureVector> random_points(int n, Prng& rng) {
    std::vector<FeatureVector> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back({rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});
    return pts;
}

}  // namespace

TEST_CASE("coherence consumption endpoints and a frozen value") {
    REQUIRE(coherence_consumption(1.0, 1.0, 2) == Approx(0.0).margin(1e-15));
    REQUIRE(coherence_consumption(0.0, 1.0, 2) == Approx(1.0).margin(1e-15));
    // H2(0.25), frozen from direct evaluation.
    REQUIRE(coherence_consumption(0.5, 1.0, 2) == Approx(0.8112781244591328).margin(1e-14));

    REQUIRE_THROWS_AS(coherence_consumption(1.2, 1.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(coherence_consumption(0.5, -0.1, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(coherence_consumption(0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("coherence consumption at alpha = 1 reduces to H2((1-K)/2)") {
    for (double k : {0.0, 0.2, 0.5, 0.9, 1.0})
        REQUIRE(coherence_consumption(k, 1.0, 2) ==
                Approx(binary_entropy((1.0 - k) / 2.0)).margin(1e-14));
}

TEST_CASE("coherence consumption decreases monotonically in the trace") {
    for (double alpha : {0.25, 0.5, 1.0}) {
        double prev = coherence_consumption(0.0, alpha, 2);
        for (double t = 0.05; t <= 1.0 + 1e-12; t += 0.05) {
            const double cur = coherence_consumption(std::min(t, 1.0), alpha, 2);
            REQUIRE(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("geometric discord closed form") {
    REQUIRE(geometric_discord_closed_form(1.0, 1.0, 2) == 0.0);
    REQUIRE(geometric_discord_closed_form(0.0, 1.0, 2) == Approx(0.0625).margin(1e-15));
    REQUIRE(geometric_discord_closed_form(0.5, 0.5, 2) == Approx(0.0078125).margin(1e-15));

    REQUIRE_THROWS_AS(geometric_discord_closed_form(-0.1, 1.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(geometric_discord_closed_form(0.5, 2.0, 2), std::invalid_argument);
}

TEST_CASE("geometric discord scales as alpha squared") {
    const double t2 = 0.3;
    const double base = geometric_discord_closed_form(t2, 1.0, 2);
    for (double alpha : {0.2, 0.4, 0.8})
        REQUIRE(geometric_discord_closed_form(t2, alpha, 2) ==
                Approx(alpha * alpha * base).margin(1e-15));
}

TEST_CASE("trace of the squared unitary") {
    Dqc1Config cfg;
    REQUIRE(trace_u_squared(UnitaryMatrix(ComplexMatrix::Identity(4, 4)), cfg).value ==
            Complex(1.0));
    REQUIRE(std::abs(trace_u_squared(UnitaryMatrix(phase_ladder()), cfg).value) < 1e-15);
}

TEST_CASE("two controlled applications equal the controlled square") {
    Prng rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        const UnitaryMatrix u = random_unitary(4, rng);
        const ComplexMatrix twice = controlled_unitary(u).mat() * controlled_unitary(u).mat();
        const ComplexMatrix square = controlled_unitary(UnitaryMatrix(u.mat() * u.mat())).mat();
        REQUIRE(max_abs(twice - square) < 1e-12);
    }
}

TEST_CASE("single-point resource map is all zeros") {
    Dqc1Config cfg;
    const std::vector<FeatureVector> one{{1.0, 2.0}};
    const auto records = resource_map(one, cfg, {2, 2});
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].kernel_abs == Approx(1.0).margin(1e-12));
    REQUIRE(records[0].delta_coherence == Approx(0.0).margin(1e-10));
    REQUIRE(records[0].geometric_discord == Approx(0.0).margin(1e-12));
    REQUIRE(records[0].bound_satisfied);
}

TEST_CASE("discord never exceeds coherence consumption in exact mode") {
    Prng rng(42);
    Dqc1Config cfg;
    for (double alpha : {0.25, 0.5, 1.0}) {
        cfg.alpha = alpha;
        // 210 random pairs per alpha via small batches.
        for (int batch = 0; batch < 14; ++batch) {
            const auto pts = random_points(5, rng);  // 15 pairs per batch
            for (const auto& r : resource_map(pts, cfg, {2, 2})) {
                REQUIRE(r.bound_satisfied);
                REQUIRE(r.geometric_discord <= r.delta_coherence + 1e-12);
            }
        }
    }
}

TEST_CASE("record count and indexing cover the upper triangle") {
    Prng rng(43);
    Dqc1Config cfg;
    const auto pts = random_points(4, rng);
    const auto records = resource_map(pts, cfg, {2, 2});
    REQUIRE(records.size() == 10);
    std::size_t idx = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            REQUIRE(records[idx].i == i);
            REQUIRE(records[idx].j == j);
            ++idx;
        }
}

TEST_CASE("shot-mode resource records agree with exact ones within 5 sigma") {
    Prng rng(44);
    const auto pts = random_points(5, rng);

    Dqc1Config exact_cfg;
    const auto exact = resource_map(pts, exact_cfg, {2, 2});

    Dqc1Config shots_cfg;
    shots_cfg.mode = SamplingMode::shots;
    shots_cfg.shots = 100000;
    shots_cfg.seed = 4242;
    const auto sampled = resource_map(pts, shots_cfg, {2, 2});

    REQUIRE(sampled.size() == exact.size());
    const double sigma = 1.0 / std::sqrt(static_cast<double>(shots_cfg.shots));
    for (std::size_t k = 0; k < exact.size(); ++k) {
        REQUIRE(std::abs(sampled[k].kernel_abs - exact[k].kernel_abs) < 5.0 * sigma);
        // Entropy derivative is bounded near these operating points, so the
        // same concentration scale applies loosely.
        REQUIRE(std::abs(sampled[k].delta_coherence - exact[k].delta_coherence) <
                5.0 * sigma * 10.0);
        REQUIRE(std::abs(sampled[k].geometric_discord - exact[k].geometric_discord) <
                5.0 * sigma);
    }
}

TEST_CASE("resource map propagates engine errors") {
    Dqc1Config cfg;
    cfg.mode = SamplingMode::shots;
    cfg.alpha = 0.0;
    const std::vector<FeatureVector> pts{{0.1, 0.2}, {0.3, 0.4}};
    REQUIRE_THROWS_AS(resource_map(pts, cfg, {2, 2}), std::runtime_error);
    REQUIRE_THROWS_AS(resource_map({}, cfg, {2, 2}), std::invalid_argument);
}
