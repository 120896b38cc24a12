// CHSH values and angular correlation curves for quantum, raw classical and
// distorted classical sources.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qaffine/distortion.hpp"
#include "qaffine/lhv.hpp"
#include "qaffine/measurement.hpp"
#include "qaffine/qstate.hpp"

namespace qaffine {

/// Settings a, a' for party A and b, b' for party B. Arms are ordered
/// (a,b), (a,b'), (a',b), (a',b').
struct ChshSettings {
    MeasurementSetting a;
    MeasurementSetting a_prime;
    MeasurementSetting b;
    MeasurementSetting b_prime;

    /// Coplanar x-z settings at 0, pi/2 (A) and pi/4, 3pi/4 (B).
    static ChshSettings canonical();
    std::array<std::array<MeasurementSetting, 2>, 4> arms() const;
};

struct ChshResult {
    std::array<double, 4> correlations{};
    std::array<double, 4> errors{};  ///< one standard error per correlation
    std::array<ProbabilityTable, 4> tables;
    double s_value = 0.0;
    bool clipped = false;
};

/// |E1 - E2 + E3 + E4|
double chsh_combination(const std::array<double, 4>& e);

/// Classical LHV source observed through a distortion pipeline. `trials` sets
/// the scale of the count tables the pipeline sees.
struct ClassicalSource {
    HiddenVariableModel model;
    DistortionPipeline pipeline;
    double trials = 1.0;
};

using BellSource = std::variant<DensityMatrix, ClassicalSource>;

/// Exact tables: quantum trace, or the LHV mixture expectation turned into
/// expected counts and pushed through the pipeline. Errors are the standard
/// errors a sampled run with the same trial count would have (zero for a
/// quantum source).
ChshResult chsh_exact(const BellSource& source, const ChshSettings& settings);

/// Monte Carlo version; arm i uses substream split(i) of the seed. Throws
/// DegenerateDataError if the pipeline empties an arm's table.
ChshResult chsh_sampled(const HiddenVariableModel& model, const DistortionPipeline& pipeline,
                        const ChshSettings& settings, std::uint64_t trials, std::uint64_t seed,
                        unsigned threads = 0);

struct AngularCurve {
    std::vector<double> theta;
    std::vector<double> correlation;
    std::string source;  ///< quantum | classical-raw | classical-distorted
    bool clipped = false;
};

std::string source_label(const BellSource& source);

/// E(theta) on theta_i = pi i / (n - 1), party A along z, party B at theta in the x-z plane.
AngularCurve angular_sweep(const BellSource& source, std::size_t n_points);

/// Sampled sweep; point i uses substream split(i) of the seed.
AngularCurve angular_sweep_sampled(const ClassicalSource& source, std::size_t n_points,
                                   std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace qaffine
