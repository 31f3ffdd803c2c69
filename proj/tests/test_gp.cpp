#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mathieu/gp.hpp"
#include "mathieu/stats.hpp"

using namespace mathieu;
using gp::AcfSpec;

TEST(Acf, ValueAtZeroIsVariance) { EXPECT_NEAR(gp::acf(0.0, AcfSpec{0.229, 5.0}), 0.052441, 1e-15); }

TEST(Acf, ValueAtOneTimeScale) { EXPECT_NEAR(gp::acf(1.0, AcfSpec{1.0, 1.0}), 0.6065306597126334, 1e-15); }

TEST(Acf, EvenAndDecaying) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    const AcfSpec spec{0.3, 4.0};
    double previous = gp::acf(0.0, spec);
    for (int i = 0; i < 100; ++i) {
        const double tau = u(rng);
        EXPECT_EQ(gp::acf(tau, spec), gp::acf(-tau, spec));
        EXPECT_LE(gp::acf(tau, spec), gp::acf(0.0, spec));
    }
    for (double tau = 0.5; tau < 60.0; tau += 0.5) {
        const double v = gp::acf(tau, spec);
        EXPECT_LT(v, previous);
        previous = v;
    }
    EXPECT_LT(gp::acf(60.0, spec), 1e-40);
}

TEST(Acf, CurvatureOfNormalizedAcf) {
    EXPECT_DOUBLE_EQ(gp::acf_curvature_at_zero(AcfSpec{0.2, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(gp::acf_curvature_at_zero(AcfSpec{0.2, 10.0}), 0.01);
    EXPECT_DOUBLE_EQ(gp::acf_curvature_at_zero(AcfSpec{0.2, 2.5}), 0.16);
}

TEST(Acf, CurvatureMatchesFiniteDifference) {
    const AcfSpec spec{0.7, 3.0};
    const double h = 1e-3;
    const double second = (gp::acf(h, spec) - 2.0 * gp::acf(0.0, spec) + gp::acf(-h, spec)) / (h * h);
    EXPECT_NEAR(-second / gp::acf(0.0, spec), gp::acf_curvature_at_zero(spec), 1e-6);
}

TEST(Acf, InvalidSpecRejected) {
    EXPECT_THROW(AcfSpec({-0.1, 1.0}).validate(), InvalidArgument);
    EXPECT_THROW(AcfSpec({0.1, 0.0}).validate(), InvalidArgument);
}

TEST(SampleGp, ZeroVarianceGivesZeros) {
    const auto path = gp::sample_gp(AcfSpec{0.0, 5.0}, 1000, 0.01, 3);
    EXPECT_EQ(path.size(), 1000);
    EXPECT_TRUE((path.channel("alpha").array() == 0.0).all());
}

TEST(SampleGp, DeterministicInSeed) {
    const AcfSpec spec{0.229, 5.0};
    const auto a = gp::sample_gp(spec, 5000, 0.005, 42);
    const auto b = gp::sample_gp(spec, 5000, 0.005, 42);
    const auto c = gp::sample_gp(spec, 5000, 0.005, 43);
    EXPECT_TRUE(a.channel("alpha") == b.channel("alpha"));
    EXPECT_FALSE(a.channel("alpha") == c.channel("alpha"));
    EXPECT_EQ(a.dt(), 0.005);
    EXPECT_EQ(a.t0(), 0.0);
}

TEST(SampleGp, RejectsBadGrid) {
    EXPECT_THROW(gp::sample_gp(AcfSpec{0.1, 1.0}, 1, 0.01, 0), InvalidArgument);
    EXPECT_THROW(gp::sample_gp(AcfSpec{0.1, 1.0}, 10, 0.0, 0), InvalidArgument);
}

TEST(Circulant, EmbeddingSizeIsPowerOfTwo) {
    const gp::CirculantSampler s(AcfSpec{0.2, 1.0}, 1000, 0.05);
    EXPECT_EQ(s.embedding_size(), 2048);
    EXPECT_GE(s.embedding_size(), 2 * (s.size() - 1));
    const gp::CirculantSampler t(AcfSpec{0.2, 1.0}, 1025, 0.05);
    EXPECT_EQ(t.embedding_size(), 2048);
}

TEST(Circulant, EmbeddedCovarianceIsExact) {
    // A grid coarse against ell keeps every eigenvalue clearly positive.
    const AcfSpec spec{0.229, 1.0};
    const gp::CirculantSampler s(spec, 1000, 0.5);
    ASSERT_FALSE(s.clamped());
    const auto cov = s.embedded_covariance();
    const double var = spec.sigma_alpha * spec.sigma_alpha;
    for (Eigen::Index k = 0; k < s.size(); ++k) EXPECT_NEAR(cov(k), gp::acf(0.5 * k, spec), 1e-10 * var) << k;
}

TEST(Circulant, ClampingPerturbsCovarianceNegligibly) {
    // Fine grids push the high-frequency eigenvalues into rounding noise.
    const AcfSpec spec{0.229, 1.0};
    const gp::CirculantSampler s(spec, 4096, 0.05);
    EXPECT_TRUE(s.clamped());
    const auto cov = s.embedded_covariance();
    const double var = spec.sigma_alpha * spec.sigma_alpha;
    for (Eigen::Index k = 0; k < s.size(); ++k) EXPECT_NEAR(cov(k), gp::acf(0.05 * k, spec), 1e-9 * var) << k;
}

TEST(Circulant, LongCorrelationOnShortGridIsNotPsd) {
    EXPECT_THROW(gp::CirculantSampler(AcfSpec{1.0, 100.0}, 64, 1.0), EmbeddingNotPSD);
}

TEST(Circulant, ClampedEigenvaluesAreNonNegative) {
    const gp::CirculantSampler s(AcfSpec{0.178, 10.0}, 100001, 0.005);
    EXPECT_GE(s.eigenvalues().minCoeff(), 0.0);
}

// Per-index marginal over many independent draws.
TEST(Circulant, MarginalIsGaussian) {
    const AcfSpec spec{0.5, 2.0};
    const gp::CirculantSampler s(spec, 64, 0.25);
    stats::Moments m;
    double third = 0.0, fourth = 0.0;
    std::vector<double> values;
    for (int seed = 0; seed < 5000; ++seed) {
        Engine engine = make_engine(99, static_cast<std::uint64_t>(seed), Stream::Excitation);
        auto [a, b] = s.draw_pair(engine);
        values.push_back(a(17));
        values.push_back(b(17));
    }
    for (double v : values) m.add(v);
    const double sd = std::sqrt(m.variance());
    for (double v : values) {
        const double z = (v - m.mean) / sd;
        third += z * z * z;
        fourth += z * z * z * z;
    }
    const double n = static_cast<double>(values.size());
    EXPECT_LT(std::abs(third / n), 0.1);
    EXPECT_LT(std::abs(fourth / n - 3.0), 0.2);
    EXPECT_NEAR(m.variance(), 0.25, 0.25 * 0.05);
    EXPECT_LT(std::abs(m.mean), 0.02);
}

// The two halves of one complex draw are uncorrelated.
TEST(Circulant, PairHalvesIndependent) {
    const gp::CirculantSampler s(AcfSpec{1.0, 1.0}, 256, 0.5);
    double cross = 0.0;
    int count = 0;
    for (int seed = 0; seed < 4000; ++seed) {
        Engine engine(static_cast<std::uint64_t>(seed));
        auto [a, b] = s.draw_pair(engine);
        cross += a(100) * b(100);
        ++count;
    }
    EXPECT_LT(std::abs(cross / count), 0.06);
}

// A long path reproduces the target variance and the lag-ell correlation.
// The statistical error of one 5000-unit path is about 6 % for the
// variance, so the estimate pools 40 paths.
TEST(SampleGp, LongPathStatistics) {
    const AcfSpec spec{0.229, 5.0};
    const double dt = 0.005;
    const Eigen::Index n = 1'000'000;
    const gp::CirculantSampler s(spec, n, dt);
    const Eigen::Index lag = static_cast<Eigen::Index>(std::lround(spec.ell_alpha / dt));
    double sum_sq = 0.0, sum_lag = 0.0, count = 0.0, count_lag = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        Engine engine = make_engine(5, static_cast<std::uint64_t>(pair), Stream::Excitation);
        auto [a, b] = s.draw_pair(engine);
        for (const auto* v : {&a, &b}) {
            sum_sq += v->squaredNorm();
            count += static_cast<double>(n);
            sum_lag += v->head(n - lag).dot(v->tail(n - lag));
            count_lag += static_cast<double>(n - lag);
        }
    }
    const double var = sum_sq / count;
    EXPECT_NEAR(var, 0.052441, 0.052441 * 0.02);
    EXPECT_NEAR((sum_lag / count_lag) / var, std::exp(-0.5), std::exp(-0.5) * 0.05);
}
