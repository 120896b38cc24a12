#include <gtest/gtest.h>

#include <random>

#include "qaffine/affine.hpp"
#include "qaffine/distortion.hpp"
#include "qaffine/error.hpp"
#include "test_support.hpp"

using namespace qaffine;
using qaffine::testing::max_abs_diff;

namespace {

ProbabilityTable random_table(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) sum += (x = u(rng));
    // mix with uniform so every cell exceeds `floor`
    for (auto& x : v) x = floor + (1.0 - n * floor) * x / sum;
    return ProbabilityTable::unchecked(v);
}

const std::vector<double> kQdiceCounts{2e5, 4e5, 4e5, 2e5};

}  // namespace

TEST(LinearCorrection, Examples) {
    EXPECT_DOUBLE_EQ(correct_value({1.0, 0.0}, 17.5), 17.5);
    EXPECT_DOUBLE_EQ(correct_value({2.0, 3.0}, 5.0), 4.0);
    EXPECT_THROW((LinearCorrection{0.0, 0.0}.validate()), ContractError);
    EXPECT_THROW((LinearCorrection{1.0, -1.0}.validate()), ContractError);
}

TEST(LinearCorrection, QdiceCountsToSinglet) {
    const double t = 1.2e6;
    const LinearCorrection c{3.0 / t, t / 6};
    std::vector<double> out;
    for (double x : kQdiceCounts) out.push_back(c(x));
    EXPECT_LE(max_abs_diff(out, {0.0, 0.5, 0.5, 0.0}), 1e-15);
}

TEST(LinearCorrection, AffineAndClosed) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const LinearCorrection f{u(rng), u(rng)};
        const LinearCorrection g{u(rng), u(rng)};
        const double x = 10 * u(rng), y = 10 * u(rng), lambda = u(rng) / 5;
        // affine: f(l x + (1 - l) y) = l f(x) + (1 - l) f(y)
        EXPECT_NEAR(f(lambda * x + (1 - lambda) * y), lambda * f(x) + (1 - lambda) * f(y), 1e-12);
        const LinearCorrection h = f.then(g);
        EXPECT_NEAR(h(x), g(f(x)), 1e-12);
        EXPECT_GT(h.s, 0.0);
    }
}

TEST(Misclassify, Examples) {
    const ProbabilityTable p({0.3, 0.7});
    EXPECT_EQ(misclassify({0.0}, p), p);
    EXPECT_LE(max_abs_diff(misclassify({2.0}, ProbabilityTable({2.0 / 3, 1.0 / 3})).values(), {1.0, 0.0}), 1e-15);
    for (double eps : {-0.5, 0.3, 7.0}) {
        EXPECT_LE(max_abs_diff(misclassify({eps}, ProbabilityTable({0.5, 0.5})).values(), {0.5, 0.5}), 1e-15);
    }
    EXPECT_THROW(misclassify({-1.0}, p), ContractError);
    EXPECT_THROW(misclassify({0.5}, ProbabilityTable({0.25, 0.25, 0.25, 0.25})), DimensionError);
}

TEST(Misclassify, IsTheTwoOutcomeAffineMap) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> eps_dist(-0.9, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double eps = eps_dist(rng);
        const auto p = random_table(rng, 2);
        const auto lhs = misclassify({eps}, p);
        const auto rhs = transform_probabilities(AffineMap(1.0 + eps, 2), p);
        EXPECT_EQ(lhs.values(), rhs.values());
    }
}

TEST(Misclassify, PartiesActIndependently) {
    std::mt19937_64 rng(43);
    const auto p = random_table(rng, 4);
    const double eps = 0.4;
    const auto out = misclassify_parties({eps}, p);
    // each bit is flipped with the 2x2 map M = [[1+e/2... ]]: apply M (x) M directly
    const double d = 1 + eps / 2, o = -eps / 2;
    const double m[2][2] = {{d, o}, {o, d}};
    for (std::size_t i = 0; i < 4; ++i) {
        double expected = 0.0;
        for (std::size_t j = 0; j < 4; ++j) expected += m[i >> 1][j >> 1] * m[i & 1][j & 1] * p[j];
        EXPECT_NEAR(out[i], expected, 1e-15);
    }
    // correlations scale by (1 + eps)^2
    const double e_in = p[0] - p[1] - p[2] + p[3];
    EXPECT_NEAR(out[0] - out[1] - out[2] + out[3], (1 + eps) * (1 + eps) * e_in, 1e-14);
    EXPECT_EQ(misclassify_parties({eps}, ProbabilityTable({0.3, 0.7})), misclassify({eps}, ProbabilityTable({0.3, 0.7})));
}

TEST(ThresholdCounts, Examples) {
    const CountTable raw{kQdiceCounts, 1.2e6};
    EXPECT_EQ(threshold_counts({0.0}, raw), raw);
    const auto out = threshold_counts({2e5}, raw);
    EXPECT_EQ(out.counts, (std::vector<double>{0.0, 2e5, 2e5, 0.0}));
    EXPECT_DOUBLE_EQ(out.total, 4e5);
    const auto empty = threshold_counts({10.0}, CountTable{{1, 2, 3, 4}, 10});
    EXPECT_EQ(empty.counts, (std::vector<double>{0, 0, 0, 0}));
    EXPECT_DOUBLE_EQ(empty.total, 0.0);
    EXPECT_THROW(threshold_counts({-1.0}, raw), ContractError);
}

TEST(AnalyzeCounts, Examples) {
    EXPECT_EQ(analyze_counts({{0, 2e5, 2e5, 0}, 4e5}).values(), (std::vector<double>{0, 0.5, 0.5, 0}));
    EXPECT_EQ(analyze_counts({{7, 7, 7, 7}, 28}).values(), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
    EXPECT_EQ(analyze_counts({{0, 0, 5, 0}, 5}).values(), (std::vector<double>{0, 0, 1, 0}));
    EXPECT_THROW(analyze_counts({{0, 0, 0, 0}, 0}), DegenerateDataError);
}

TEST(EquivalentAffine, Examples) {
    EXPECT_DOUBLE_EQ(equivalent_affine(0.0, 100.0, 4).a(), 1.0);
    EXPECT_NEAR(equivalent_affine(1.0, 6.0, 4).a(), 3.0, 1e-14);
    EXPECT_NEAR(equivalent_affine(0.25, 1.0, 2).a(), 2.0, 1e-14);
    EXPECT_THROW(equivalent_affine(0.25, 1.0, 4), DeviceSaturatedError);
    EXPECT_THROW(equivalent_affine(1.0, 1.0, 4), DeviceSaturatedError);
}

TEST(Pipeline, ThresholdIsAffineOnExpectedCounts) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> frac(0.0, 0.2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = trial % 2 == 0 ? 4 : 8;
        const double t = 1e6;
        const double theta = frac(rng) * t / static_cast<double>(n);
        const auto p = random_table(rng, n, theta / t + 1e-3);
        const auto out = apply_pipeline(DistortionPipeline{{}, 0.0, theta, PipelineMode::expected}, expected_counts(p, t));
        EXPECT_FALSE(out.clipped);
        const auto law = transform_probabilities(equivalent_affine(theta, t, n), p);
        EXPECT_LE(max_abs_difference(out.probabilities, law), 1e-12);
    }
}

TEST(Pipeline, QdiceThresholdToSinglet) {
    const auto pipeline = DistortionPipeline::threshold_for(3.0, 1.2e6, 4);
    EXPECT_NEAR(pipeline.theta, 2e5, 1e-9);
    const auto out = apply_pipeline(pipeline, CountTable{kQdiceCounts, 1.2e6});
    EXPECT_LE(max_abs_diff(out.probabilities.values(), {0.0, 0.5, 0.5, 0.0}), 1e-12);
    EXPECT_NEAR(pipeline.affine_factor(1.2e6, 4, 2), 3.0, 1e-12);
}

TEST(Pipeline, IdentityLeavesTableAlone) {
    const DistortionPipeline id;
    EXPECT_TRUE(id.is_identity());
    const CountTable raw{{1, 2, 3, 4}, 10};
    const auto out = apply_pipeline(id, raw);
    EXPECT_EQ(out.processed, raw);
    EXPECT_EQ(out.probabilities.values(), (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
    EXPECT_FALSE(out.clipped);
}

TEST(Pipeline, BackgroundSubtractionIsAffine) {
    std::mt19937_64 rng(45);
    const auto p = random_table(rng, 4);
    const double t = 1e5, b = 5e3;
    const auto out = apply_pipeline(DistortionPipeline{{2.0, b}, 0.0, 0.0, PipelineMode::expected}, expected_counts(p, t));
    const auto law = transform_probabilities(AffineMap(t / (t - 4 * b), 4), p);
    EXPECT_LE(max_abs_difference(out.probabilities, law), 1e-12);
}

TEST(Pipeline, ClippingIsFlagged) {
    // cell 0 sits below theta, so the output departs from the affine law
    const ProbabilityTable p({0.05, 0.35, 0.3, 0.3});
    const double t = 1e6, theta = 0.1 * t;
    const auto out = apply_pipeline(DistortionPipeline{{}, 0.0, theta, PipelineMode::expected}, expected_counts(p, t));
    EXPECT_TRUE(out.clipped);
    const auto law = transform_probabilities(equivalent_affine(theta, t, 4), p);
    EXPECT_GT(max_abs_difference(out.probabilities, law), 1e-3);
    EXPECT_FALSE(out.probabilities.negativity_flag());
}

TEST(Pipeline, AllCellsBelowThresholdIsDegenerate) {
    EXPECT_THROW(apply_pipeline(DistortionPipeline{{}, 0.0, 100.0, PipelineMode::expected}, CountTable{{1, 2, 3, 4}, 10}),
                 DegenerateDataError);
}

TEST(Pipeline, AffineFactorSaturates) {
    DistortionPipeline p;
    p.theta = 0.25;
    EXPECT_THROW(p.affine_factor(1.0, 4, 2), DeviceSaturatedError);
    EXPECT_THROW(DistortionPipeline::threshold_for(0.5, 1.0, 4), ContractError);
}

TEST(PipelineMode, ParseRoundTrip) {
    for (auto m : {PipelineMode::expected, PipelineMode::sampled}) EXPECT_EQ(parse_pipeline_mode(to_string(m)), m);
    EXPECT_THROW(parse_pipeline_mode("exact"), ContractError);
}
