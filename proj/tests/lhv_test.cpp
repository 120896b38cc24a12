#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "qaffine/bellharness.hpp"
#include "qaffine/error.hpp"
#include "qaffine/lhv.hpp"
#include "qaffine/rng.hpp"
#include "test_support.hpp"

using namespace qaffine;
using qaffine::testing::random_bloch;
using qaffine::testing::random_setting;

namespace {

std::vector<MeasurementSetting> both_z() { return {MeasurementSetting::along_z(), MeasurementSetting::along_z()}; }

std::vector<double> frequencies(const CountTable& t) {
    std::vector<double> out;
    for (double c : t.counts) out.push_back(c / t.total);
    return out;
}

}  // namespace

TEST(RandomStream, DeterministicAndPositional) {
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_bits(), b.next_bits());
    RandomStream c(42);
    EXPECT_EQ(c.bits_at(57), RandomStream(42).bits_at(57));
    c.seek(57);
    EXPECT_EQ(c.next_bits(), RandomStream(42).bits_at(57));
    EXPECT_NE(RandomStream(42).bits_at(0), RandomStream(43).bits_at(0));
}

TEST(RandomStream, SplitGivesDistinctReproducibleChildren) {
    const RandomStream root(7);
    EXPECT_EQ(root.split(3).bits_at(0), RandomStream(7).split(3).bits_at(0));
    EXPECT_NE(root.split(3).bits_at(0), root.split(4).bits_at(0));
    EXPECT_NE(root.split(0).bits_at(0), root.bits_at(0));
}

TEST(RandomStream, UniformMoments) {
    RandomStream s(9);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.next_uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum2 += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum2 / n, 1.0 / 3, 0.005);
}

TEST(HiddenVariableModel, ValidatesInput) {
    EXPECT_THROW(HiddenVariableModel({0.5, 0.6}, {{{0, 0, 1}}, {{0, 0, 1}}}), ContractError);
    EXPECT_THROW(HiddenVariableModel({-0.5, 1.5}, {{{0, 0, 1}}, {{0, 0, 1}}}), ContractError);
    EXPECT_THROW(HiddenVariableModel({1.0}, {{{0, 0, 1.5}}}), ContractError);
    EXPECT_THROW(HiddenVariableModel({0.5, 0.5}, {{{0, 0, 1}}, {{0, 0, 1}, {0, 0, 1}}}), ContractError);
    EXPECT_THROW(HiddenVariableModel({1.0}, {}), ContractError);
}

TEST(HiddenVariableModel, FromQdice) {
    const auto m = model_from_decomposition(qdice_decomposition());
    EXPECT_EQ(m.n_terms(), 6U);
    EXPECT_EQ(m.n_parties(), 2U);
    bool found = false;
    for (std::size_t t = 0; t < m.n_terms(); ++t) {
        EXPECT_DOUBLE_EQ(m.weights()[t], 1.0 / 6);
        const auto& b = m.local_bloch()[t];
        if (b[0].z == 1.0 && b[1].z == -1.0) found = true;
    }
    EXPECT_TRUE(found);
    EXPECT_LE(frobenius_distance(m.mixture_state().matrix(), qdice_sigma().matrix()), 1e-14);
}

TEST(HiddenVariableModel, ExactProbabilitiesMatchQuantumTrace) {
    const auto m = model_from_decomposition(qdice_decomposition());
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<MeasurementSetting> s{random_setting(rng), random_setting(rng)};
        EXPECT_LE(max_abs_difference(m.exact_probabilities(s), projective_probabilities(qdice_sigma(), s)), 1e-14);
    }
}

TEST(HiddenVariableModel, TermSelection) {
    const HiddenVariableModel m({0.25, 0.75}, {{{0, 0, 1}}, {{0, 0, -1}}});
    EXPECT_EQ(m.term_for(0.0), 0U);
    EXPECT_EQ(m.term_for(0.2499), 0U);
    EXPECT_EQ(m.term_for(0.25), 1U);
    EXPECT_EQ(m.term_for(0.999999), 1U);
}

TEST(SampleTrial, DeterministicTerm) {
    const HiddenVariableModel m({1.0}, {{{0, 0, 1}}});
    const std::vector<MeasurementSetting> z{MeasurementSetting::along_z()};
    RandomStream rng(5);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_trial(m, z, rng), 0U);
    EXPECT_EQ(rng.counter(), 2000U);
}

TEST(SampleTrial, OrthogonalSettingIsFair) {
    const HiddenVariableModel m({1.0}, {{{0, 0, 1}}});
    const std::vector<MeasurementSetting> x{MeasurementSetting::in_xz_plane(std::numbers::pi / 2)};
    RandomStream rng(6);
    const std::uint64_t t = 100000;
    const auto table = run_trials(m, x, t, rng);
    EXPECT_NEAR(table.counts[0] / t, 0.5, 3 * std::sqrt(0.25 / t));
}

TEST(SampleTrial, TermFrequencies) {
    const HiddenVariableModel m({0.5, 0.5}, {{{0, 0, 1}}, {{0, 0, -1}}});
    const std::vector<MeasurementSetting> z{MeasurementSetting::along_z()};
    const RandomStream rng(8);
    const std::uint64_t t = 100000;
    std::uint64_t first = 0;
    for (std::uint64_t i = 0; i < t; ++i) {
        if (sample_trial_at(m, z, rng, i * draws_per_trial(m)).term == 0) ++first;
    }
    EXPECT_NEAR(static_cast<double>(first) / t, 0.5, 3 * std::sqrt(0.25 / t));
}

TEST(RunTrials, SingleTrialAndDeterminism) {
    const auto m = model_from_decomposition(qdice_decomposition());
    RandomStream one(3);
    const auto single = run_trials(m, both_z(), 1, one);
    EXPECT_DOUBLE_EQ(single.total, 1.0);
    EXPECT_DOUBLE_EQ(single.sum(), 1.0);

    RandomStream r1(3), r2(3);
    EXPECT_EQ(run_trials(m, both_z(), 50000, r1), run_trials(m, both_z(), 50000, r2));
    EXPECT_EQ(r1.counter(), 50000U * draws_per_trial(m));
}

TEST(RunTrials, IndependentOfThreadCount) {
    const auto m = model_from_decomposition(qdice_decomposition());
    const std::uint64_t t = 300000;
    RandomStream r1(4), r2(4), r4(4);
    const auto serial = run_trials(m, both_z(), t, r1, 1);
    EXPECT_EQ(serial, run_trials(m, both_z(), t, r2, 2));
    EXPECT_EQ(serial, run_trials(m, both_z(), t, r4, 4));
}

TEST(RunTrials, ContinuationMatchesOneLongRun) {
    const auto m = model_from_decomposition(qdice_decomposition());
    RandomStream whole(12), parts(12);
    const auto full = run_trials(m, both_z(), 100000, whole);
    const auto a = run_trials(m, both_z(), 40000, parts);
    const auto b = run_trials(m, both_z(), 60000, parts);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(full.counts[k], a.counts[k] + b.counts[k]);
}

TEST(RunTrials, QdiceFrequenciesWithinThreeSigma) {
    const auto m = model_from_decomposition(qdice_decomposition());
    const std::uint64_t t = 1'200'000;
    RandomStream rng(1);
    const auto table = run_trials(m, both_z(), t, rng);
    const std::vector<double> exact{1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
    for (std::size_t k = 0; k < 4; ++k) {
        const double sigma = std::sqrt(exact[k] * (1 - exact[k]) / t);
        EXPECT_NEAR(table.counts[k] / t, exact[k], 3 * sigma) << "cell " << k;
        EXPECT_NEAR(table.counts[k], exact[k] * t, 3 * sigma * t);
    }
}

TEST(RunTrials, ConvergenceBound) {
    const auto m = model_from_decomposition(qdice_decomposition());
    std::mt19937_64 gen(33);
    for (std::uint64_t t : {1000ULL, 10000ULL, 100000ULL}) {
        for (int trial = 0; trial < 5; ++trial) {
            const std::vector<MeasurementSetting> s{random_setting(gen), random_setting(gen)};
            RandomStream rng(100 + static_cast<std::uint64_t>(trial));
            const auto f = frequencies(run_trials(m, s, t, rng));
            const auto exact = projective_probabilities(qdice_sigma(), s);
            for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(f[k] - exact[k]), 4.0 / std::sqrt(t));
        }
    }
}

TEST(RunTrials, OutcomesFactorizeGivenTerm) {
    const auto m = model_from_decomposition(qdice_decomposition());
    const std::vector<MeasurementSetting> s{MeasurementSetting::in_xz_plane(0.7), MeasurementSetting::in_xz_plane(1.9)};
    const RandomStream rng(17);
    const std::uint64_t t = 100000;
    std::vector<std::array<double, 4>> table(m.n_terms(), std::array<double, 4>{});
    for (std::uint64_t i = 0; i < t; ++i) {
        const auto trial = sample_trial_at(m, s, rng, i * draws_per_trial(m));
        table[trial.term][trial.outcome] += 1.0;
    }
    int tested = 0;
    for (const auto& c : table) {
        const double n = c[0] + c[1] + c[2] + c[3];
        const double row[2] = {c[0] + c[1], c[2] + c[3]};
        const double col[2] = {c[0] + c[2], c[1] + c[3]};
        if (row[0] == 0 || row[1] == 0 || col[0] == 0 || col[1] == 0) continue;
        double chi2 = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double e = row[i] * col[j] / n;
                chi2 += (c[2 * i + j] - e) * (c[2 * i + j] - e) / e;
            }
        }
        // one degree of freedom: p = erfc(sqrt(chi2 / 2))
        EXPECT_GT(std::erfc(std::sqrt(chi2 / 2)), 0.001);
        ++tested;
    }
    EXPECT_GT(tested, 0);
}

TEST(RunTrials, NoSignaling) {
    const auto m = model_from_decomposition(qdice_decomposition());
    const auto a = MeasurementSetting::in_xz_plane(0.4);
    const std::uint64_t t = 200000;
    RandomStream r1(21), r2(22);
    const auto t1 = run_trials(m, std::vector{a, MeasurementSetting::along_z()}, t, r1);
    const auto t2 = run_trials(m, std::vector{a, MeasurementSetting::in_xz_plane(2.0)}, t, r2);
    const double p1 = (t1.counts[0] + t1.counts[1]) / t;
    const double p2 = (t2.counts[0] + t2.counts[1]) / t;
    EXPECT_NEAR(p1, p2, 3 * std::sqrt(2 * 0.25 / t));
}

TEST(RunTrials, SampledChshRespectsLocalBound) {
    std::mt19937_64 gen(34);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> w(4);
        std::vector<std::vector<BlochVector>> b;
        double total = 0.0;
        for (auto& x : w) total += (x = std::uniform_real_distribution<double>(0.1, 1.0)(gen));
        for (auto& x : w) x /= total;
        for (int t = 0; t < 4; ++t) b.push_back({random_bloch(gen), random_bloch(gen)});
        const HiddenVariableModel m(w, b);
        const ChshSettings s{random_setting(gen), random_setting(gen), random_setting(gen), random_setting(gen)};
        const auto r = chsh_sampled(m, DistortionPipeline{}, s, 100000, 500 + static_cast<std::uint64_t>(trial));
        double var = 0.0;
        for (double e : r.errors) var += e * e;
        EXPECT_LE(r.s_value, 2.0 + 5 * std::sqrt(var));
    }
    // the qdice model at canonical angles, far inside the bound
    const auto q = chsh_sampled(model_from_decomposition(qdice_decomposition()), DistortionPipeline{},
                                ChshSettings::canonical(), 100000, 1);
    EXPECT_LE(q.s_value, 2.0);
}
