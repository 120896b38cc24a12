#include "qaffine/bellharness.hpp"

#include <cmath>
#include <numbers>

#include "qaffine/error.hpp"

namespace qaffine {

namespace {

struct ArmResult {
    double correlation = 0.0;
    double error = 0.0;
    ProbabilityTable table;
    bool clipped = false;
};

std::size_t party_count(const BellSource& source) {
    if (const auto* rho = std::get_if<DensityMatrix>(&source)) return rho->n_qubits();
    return std::get<ClassicalSource>(source).model.n_parties();
}

// Pipeline output for a raw count table plus the propagated standard error of E.
ArmResult through_pipeline(const DistortionPipeline& pipeline, const CountTable& counts,
                           double trials) {
    const PipelineOutput out = apply_pipeline(pipeline, counts);
    ArmResult arm;
    arm.table = out.probabilities;
    arm.correlation = correlation(out.probabilities);
    arm.clipped = out.clipped;
    double raw_e = 0.0;
    const double raw_sum = counts.sum();
    if (raw_sum > 0.0) {
        raw_e = (counts.counts[0] - counts.counts[1] - counts.counts[2] + counts.counts[3]) / raw_sum;
    }
    const double factor = pipeline.affine_factor(trials, 4, 2);
    arm.error = factor * std::sqrt(std::max(0.0, 1.0 - raw_e * raw_e) / trials);
    return arm;
}

ArmResult exact_arm(const BellSource& source, const std::array<MeasurementSetting, 2>& settings) {
    if (const auto* rho = std::get_if<DensityMatrix>(&source)) {
        ArmResult arm;
        arm.table = projective_probabilities(*rho, settings);
        arm.correlation = correlation(arm.table);
        return arm;
    }
    const auto& classical = std::get<ClassicalSource>(source);
    const ProbabilityTable p = classical.model.exact_probabilities(settings);
    return through_pipeline(classical.pipeline, expected_counts(p, classical.trials), classical.trials);
}

void require_two_parties(const BellSource& source) {
    if (party_count(source) != 2) throw DimensionError("Bell tests need a two-party source");
}

}  // namespace

ChshSettings ChshSettings::canonical() {
    using std::numbers::pi;
    return {MeasurementSetting::in_xz_plane(0.0), MeasurementSetting::in_xz_plane(pi / 2),
            MeasurementSetting::in_xz_plane(pi / 4), MeasurementSetting::in_xz_plane(3 * pi / 4)};
}

std::array<std::array<MeasurementSetting, 2>, 4> ChshSettings::arms() const {
    return {{{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}}};
}

double chsh_combination(const std::array<double, 4>& e) {
    return std::abs(e[0] - e[1] + e[2] + e[3]);
}

ChshResult chsh_exact(const BellSource& source, const ChshSettings& settings) {
    require_two_parties(source);
    ChshResult result;
    const auto arms = settings.arms();
    for (std::size_t i = 0; i < 4; ++i) {
        ArmResult arm = exact_arm(source, arms[i]);
        result.correlations[i] = arm.correlation;
        result.errors[i] = arm.error;
        result.tables[i] = std::move(arm.table);
        result.clipped = result.clipped || arm.clipped;
    }
    result.s_value = chsh_combination(result.correlations);
    return result;
}

ChshResult chsh_sampled(const HiddenVariableModel& model, const DistortionPipeline& pipeline,
                        const ChshSettings& settings, std::uint64_t trials, std::uint64_t seed,
                        unsigned threads) {
    if (model.n_parties() != 2) throw DimensionError("Bell tests need a two-party source");
    const RandomStream root(seed);
    ChshResult result;
    const auto arms = settings.arms();
    for (std::size_t i = 0; i < 4; ++i) {
        RandomStream stream = root.split(i);
        const CountTable counts = run_trials(model, arms[i], trials, stream, threads);
        ArmResult arm = through_pipeline(pipeline, counts, static_cast<double>(trials));
        result.correlations[i] = arm.correlation;
        result.errors[i] = arm.error;
        result.tables[i] = std::move(arm.table);
        result.clipped = result.clipped || arm.clipped;
    }
    result.s_value = chsh_combination(result.correlations);
    return result;
}

std::string source_label(const BellSource& source) {
    if (std::holds_alternative<DensityMatrix>(source)) return "quantum";
    return std::get<ClassicalSource>(source).pipeline.is_identity() ? "classical-raw"
                                                                    : "classical-distorted";
}

namespace {

std::vector<double> uniform_grid(std::size_t n_points) {
    if (n_points < 2) throw ContractError("an angular sweep needs at least two points");
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return grid;
}

}  // namespace

AngularCurve angular_sweep(const BellSource& source, std::size_t n_points) {
    require_two_parties(source);
    AngularCurve curve;
    curve.theta = uniform_grid(n_points);
    curve.source = source_label(source);
    curve.correlation.reserve(n_points);
    for (double theta : curve.theta) {
        const ArmResult arm =
            exact_arm(source, {MeasurementSetting::along_z(), MeasurementSetting::in_xz_plane(theta)});
        curve.correlation.push_back(arm.correlation);
        curve.clipped = curve.clipped || arm.clipped;
    }
    return curve;
}

AngularCurve angular_sweep_sampled(const ClassicalSource& source, std::size_t n_points,
                                   std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    if (source.model.n_parties() != 2) throw DimensionError("Bell tests need a two-party source");
    AngularCurve curve;
    curve.theta = uniform_grid(n_points);
    curve.source = source_label(BellSource{source});
    const RandomStream root(seed);
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::array settings{MeasurementSetting::along_z(),
                                  MeasurementSetting::in_xz_plane(curve.theta[i])};
        RandomStream stream = root.split(i);
        const CountTable counts = run_trials(source.model, settings, trials, stream, threads);
        const ArmResult arm = through_pipeline(source.pipeline, counts, static_cast<double>(trials));
        curve.correlation.push_back(arm.correlation);
        curve.clipped = curve.clipped || arm.clipped;
    }
    return curve;
}

}  // namespace qaffine
