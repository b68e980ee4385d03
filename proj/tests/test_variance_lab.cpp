#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "geovar/variance_lab.hpp"

using namespace geovar;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Rng, StreamsAreKeyedBySeedAndIndex) {
    SampleRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
    // high halves of the key matter too
    EXPECT_NE(SampleRng(1, 0).uniform(), SampleRng(1 + (1ULL << 32), 0).uniform());
    EXPECT_NE(SampleRng(1, 0).uniform(), SampleRng(1, 1ULL << 32).uniform());
}

TEST(Rng, UniformMoments) {
    SampleRng rng(9, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST(Sampler, PointsAreUniformForTheHyperbolicArea) {
    // mu(F_A cap {y > Y}) = 1/Y - 1/A for Y >= 1, and mu(F_A) = pi/3 - 1/A.
    for (const double A : {3.0, kInfiniteHeight}) {
        SampleRng rng(31, 0);
        const int n = 100000;
        int above = 0;
        double sx = 0.0;
        for (int i = 0; i < n; ++i) {
            const PointH p = sample_point_F(A, rng);
            ASSERT_TRUE(in_F_A(p, A));
            above += p.y > 1.5;
            sx += p.x;
        }
        const double total = kAreaF - (std::isinf(A) ? 0.0 : 1.0 / A);
        const double prob = (1.0 / 1.5 - (std::isinf(A) ? 0.0 : 1.0 / A)) / total;
        EXPECT_NEAR(static_cast<double>(above) / n, prob, 4.0 * std::sqrt(prob * (1.0 - prob) / n)) << A;
        EXPECT_NEAR(sx / n, 0.0, 4.0 * std::sqrt(1.0 / 12.0 / n));
    }
    SampleRng rng(32, 0);
    EXPECT_THROW(sample_point_F(0.5, rng), std::invalid_argument);
}

TEST(Sampler, TangentAnglesAreUniform) {
    SampleRng rng(33, 0);
    const int n = 50000;
    double c = 0.0, s = 0.0;
    for (int i = 0; i < n; ++i) {
        const Tangent t = sample_tangent(rng);
        ASSERT_TRUE(in_F(t.base));
        c += std::cos(t.angle);
        s += std::sin(t.angle);
    }
    EXPECT_NEAR(c / n, 0.0, 4.0 * std::sqrt(0.5 / n));
    EXPECT_NEAR(s / n, 0.0, 4.0 * std::sqrt(0.5 / n));
}

TEST(Parallel, ResultsDoNotDependOnWorkerCount) {
    ExperimentConfig cfg;
    cfg.ann = AnnulusSpec(0.0, 0.1);
    cfg.L = 5.0;
    cfg.n_samples = 301;
    cfg.seed = 77;
    cfg.workers = 1;
    const auto one = random_segment_lengths(cfg);
    cfg.workers = 4;
    const auto four = random_segment_lengths(cfg);
    ASSERT_EQ(one.size(), four.size());
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_TRUE(same_bits(one[i], four[i])) << i;
    cfg.workers = 1;
    const Estimate e1 = var_random(cfg);
    cfg.workers = 3;
    const Estimate e3 = var_random(cfg);
    EXPECT_TRUE(same_bits(e1.mean, e3.mean));
    EXPECT_TRUE(same_bits(e1.std_error, e3.std_error));
}

TEST(Parallel, WorkerExceptionsPropagate) {
    EXPECT_THROW(parallel_samples(10, 3,
                                  [](std::size_t i) -> double {
                                      if (i == 7) throw std::runtime_error("boom");
                                      return 0.0;
                                  }),
                 std::runtime_error);
}

TEST(Summary, KnownValues) {
    const Estimate e = summarize({1.0, 2.0, 3.0, 4.0}, 2.0, 5);
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(5.0 / 3.0 / 4.0));
    EXPECT_DOUBLE_EQ(e.z_score, 0.5 / std::sqrt(5.0 / 12.0));
    EXPECT_EQ(e.n, 4u);
    EXPECT_EQ(e.seed, 5u);
    EXPECT_THROW(summarize({1.0}, 0.0, 0), std::invalid_argument);
}

TEST(RandomSegments, MeanMatchesCentering) {
    // g is Liouville-uniform, so E[time in the annulus] = L mu(A)/mu(F) for every w.
    ExperimentConfig cfg;
    cfg.ann = AnnulusSpec(0.05, 0.2);
    cfg.L = 10.0;
    cfg.n_samples = 3000;
    cfg.seed = 5;
    const auto lengths = random_segment_lengths(cfg);
    const Estimate e = summarize(lengths, random_segment_centering(cfg.ann, cfg.L), cfg.seed);
    EXPECT_LT(std::abs(e.z_score), 4.0) << e.mean << " vs " << e.prediction;
    EXPECT_NEAR(random_segment_centering(AnnulusSpec(0.0, 0.1), 1.0),
                4.0 * kPi * std::pow(std::sinh(0.05), 2) / (kPi / 3.0), 1e-15);
}

TEST(RandomSegments, PredictionAndWarnings) {
    EXPECT_NEAR(random_segment_prediction(AnnulusSpec(0.0, 0.01), 50.0), 16.0 * 50.0 * 1e-6 / kPi, 1e-18);
    ExperimentConfig cfg;
    cfg.ann = AnnulusSpec(0.0, 0.2);
    cfg.L = 2.0;
    cfg.n_samples = 20;
    cfg.A = 1000.0;
    EXPECT_FALSE(var_random(cfg).warnings.empty());
    cfg.A = 2.0;
    cfg.ann = AnnulusSpec(0.0, 0.01);
    EXPECT_TRUE(var_random(cfg).warnings.empty());
    EXPECT_NEAR(truncation_regime_parameter(AnnulusSpec(0.0, 0.01), 10.0), std::log(10.0) * 0.01 * std::log(100.0),
                1e-15);
}

TEST(RandomSegments, Validation) {
    ExperimentConfig cfg;
    cfg.n_samples = 10;
    cfg.L = 0.5;
    EXPECT_THROW(var_random(cfg), std::invalid_argument);
    cfg.L = 5.0;
    cfg.ann = AnnulusSpec(0.0, 0.3);
    EXPECT_THROW(var_random(cfg), std::invalid_argument);
    cfg.ann = AnnulusSpec(0.0, 0.1);
    cfg.A = 0.9;
    EXPECT_THROW(var_random(cfg), std::invalid_argument);
    cfg.A = 10.0;
    cfg.n_samples = 1;
    EXPECT_THROW(var_random(cfg), std::invalid_argument);
}

TEST(ClosedGeodesics, TrajectoriesCoverEachPeriod) {
    for (const std::int64_t D : {5, 8, 13, 89, 1297}) {
        const ClosedGeodesicSet set = build_closed_geodesics(Discriminant(D));
        ASSERT_EQ(set.trajectories.size(), set.h_plus());
        double total = 0.0;
        for (const auto& tr : set.trajectories) total += tr.length();
        EXPECT_NEAR(total, set.total_length(), 1e-9 * set.total_length()) << D;
    }
}

TEST(ClosedGeodesics, ExpectationIdentity) {
    for (const std::int64_t D : {5, 13, 89}) {
        const Estimate e = expectation_check(Discriminant(D), AnnulusSpec(0.0, 0.1), 4000, 17);
        EXPECT_LT(std::abs(e.z_score), 4.0) << D << ": " << e.mean << " vs " << e.prediction;
    }
}

TEST(ClosedGeodesics, ConjectureIsReportedNotAsserted) {
    // L(1, chi_5) = 2 log(golden ratio) / sqrt 5
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(closed_geodesic_conjecture(Discriminant(5), AnnulusSpec(0.0, 0.1)), 128.0 * std::log(phi) * 1e-3 / kPi,
                1e-12);
    ExperimentConfig cfg;
    cfg.D = 5;
    cfg.ann = AnnulusSpec(0.0, 0.1);
    cfg.n_samples = 50;
    const Estimate e = var_closed(cfg);
    EXPECT_EQ(e.prediction, closed_geodesic_conjecture(Discriminant(5), cfg.ann));
    EXPECT_GT(e.mean, 0.0);
    EXPECT_TRUE(e.warnings.empty());
}

TEST(ClosedGeodesics, ValidationAndTags) {
    ExperimentConfig cfg;
    cfg.D = 1297;
    cfg.A = 10.0;  // sqrt(1297)/2 = 18.007
    cfg.n_samples = 10;
    EXPECT_THROW(var_closed(cfg), std::invalid_argument);
    cfg.A = 19.0;
    cfg.n_samples = 1;
    EXPECT_THROW(var_closed(cfg), std::invalid_argument);
    cfg.D = 7;
    cfg.n_samples = 10;
    EXPECT_THROW(var_closed(cfg), std::invalid_argument);
    cfg.D = 8;
    cfg.A = 10.0;
    const Estimate e = var_closed(cfg);
    ASSERT_EQ(e.warnings.size(), 1u);
    EXPECT_NE(e.warnings[0].find("squarefree"), std::string::npos);
}

TEST(Mixing, EnvelopeFormula) {
    EXPECT_DOUBLE_EQ(mixing_envelope(0.0, 2.0, 3.0), 6.0);
    EXPECT_DOUBLE_EQ(mixing_envelope(-4.0, 1.0, 1.0), 5.0 * std::exp(-2.0));
}

TEST(Mixing, FlowedBaseMatchesDirectFlow) {
    SampleRng rng(41, 0);
    for (int i = 0; i < 100; ++i) {
        const Tangent g = sample_tangent(rng);
        const double t = 4.0 * rng.uniform();
        const PointH direct = reduce_point(geodesic_flow(g, t).base).point;
        EXPECT_NEAR(dist(flowed_base(g, t), direct), 0.0, 1e-7) << i;
    }
}

TEST(Mixing, ZeroTimeGivesTheVariance) {
    const BallObservable ball{{0.0, 1.5}, 0.3};
    const MixingEstimate m = mixing_correlation(ball, ball, 0.0, 20000, 3);
    // <phi, phi> = p - p^2 with p = mu(B)/mu(X) for a ball embedded in X
    const double p = ball.mean();
    EXPECT_NEAR(m.correlation.mean, p - p * p, 4.0 * m.correlation.std_error);
    EXPECT_NEAR(m.norm_phi * m.norm_psi, m.correlation.mean, 1e-12);
    const MixingEstimate again = mixing_correlation(ball, ball, 0.0, 20000, 3, 4);
    EXPECT_TRUE(same_bits(m.correlation.mean, again.correlation.mean));
}

TEST(Mixing, LongTimeDecorrelates) {
    const BallObservable a{{0.0, 1.5}, 0.4}, b{{0.2, 2.0}, 0.4};
    const MixingEstimate m = mixing_correlation(a, b, 12.0, 20000, 4);
    EXPECT_LT(std::abs(m.correlation.mean), 4.5 * m.correlation.std_error + m.envelope);
}
