// Detector and analysis error models that act on count tables and outcome
// statistics: linear correction X0 = s (X - b), symmetric misclassification,
// and a threshold device X = max(X0 - theta, 0).
#pragma once

#include <cstddef>
#include <string>

#include "qaffine/affine.hpp"
#include "qaffine/tables.hpp"

namespace qaffine {

struct LinearCorrection {
    double s = 1.0;  ///< rescale, > 0
    double b = 0.0;  ///< background in count units, >= 0

    /// Throws ContractError on s <= 0 or b < 0.
    void validate() const;
    double operator()(double x) const { return s * (x - b); }
    /// The correction equal to applying *this first and then `next`.
    LinearCorrection then(const LinearCorrection& next) const;
};

inline double correct_value(const LinearCorrection& c, double x) { return c(x); }

struct MisclassificationModel {
    double epsilon = 0.0;  ///< > -1

    void validate() const;
};

/// p'_i = (1 + eps) p_i - eps/2 on a two-outcome table.
ProbabilityTable misclassify(const MisclassificationModel& m, const ProbabilityTable& p);

/// The same map applied independently to every party's outcome bit of a
/// 2^n-outcome table. For n = 1 this is misclassify().
ProbabilityTable misclassify_parties(const MisclassificationModel& m, const ProbabilityTable& p);

struct ThresholdDevice {
    double theta = 0.0;  ///< >= 0, count units

    void validate() const;
    double operator()(double x) const { return x >= theta ? x - theta : 0.0; }
};

/// Per-cell max(count - theta, 0); total becomes the new cell sum.
CountTable threshold_counts(const ThresholdDevice& d, const CountTable& raw);

/// p_k = count_k / sum of counts; throws DegenerateDataError on a zero sum.
ProbabilityTable analyze_counts(const CountTable& raw);

/// a = 1 / (1 - N theta / T); throws DeviceSaturatedError if N theta >= T.
AffineMap equivalent_affine(double theta, double trials, std::size_t n_outcomes);

enum class PipelineMode { expected, sampled };

std::string to_string(PipelineMode mode);
PipelineMode parse_pipeline_mode(const std::string& text);

/// Raw counts -> linear correction per cell -> threshold per cell ->
/// normalization -> per-party misclassification.
struct DistortionPipeline {
    LinearCorrection correction;
    double epsilon = 0.0;
    double theta = 0.0;
    PipelineMode mode = PipelineMode::expected;

    /// Pipeline whose threshold alone realizes A_a on N outcomes at T trials.
    static DistortionPipeline threshold_for(double a, double trials, std::size_t n_outcomes);

    void validate() const;
    bool is_identity() const;
    /// Factor by which the pipeline multiplies a joint correlation (or any
    /// traceless part of the table) when nothing is clipped:
    /// (1 + eps)^parties * T / (T - N (b + theta)).
    double affine_factor(double trials, std::size_t n_outcomes, std::size_t parties) const;
};

struct PipelineOutput {
    CountTable processed;       ///< after correction and threshold
    ProbabilityTable probabilities;
    /// Some cell fell strictly below the threshold, so the output is no longer
    /// an affine image of the input statistics.
    bool clipped = false;
};

PipelineOutput apply_pipeline(const DistortionPipeline& pipeline, const CountTable& raw);

}  // namespace qaffine
