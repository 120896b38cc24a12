#include "qaffine/distortion.hpp"

#include <algorithm>
#include <cmath>

#include "qaffine/error.hpp"

namespace qaffine {

void LinearCorrection::validate() const {
    if (!(s > 0.0)) throw ContractError("rescale s must be positive");
    if (!(b >= 0.0)) throw ContractError("background b must be nonnegative");
}

LinearCorrection LinearCorrection::then(const LinearCorrection& next) const {
    // next.s (s (x - b) - next.b) = s next.s (x - (b + next.b / s))
    return {s * next.s, b + next.b / s};
}

void MisclassificationModel::validate() const {
    if (!(epsilon > -1.0)) throw ContractError("misclassification epsilon must exceed -1");
}

ProbabilityTable misclassify(const MisclassificationModel& m, const ProbabilityTable& p) {
    m.validate();
    if (p.n_outcomes() != 2) throw DimensionError("misclassify needs a two-outcome table");
    // p' = (1 + e) p - e/2, evaluated as the two-outcome affine map
    return transform_probabilities(AffineMap(1.0 + m.epsilon, 2), p);
}

ProbabilityTable misclassify_parties(const MisclassificationModel& m, const ProbabilityTable& p) {
    m.validate();
    const std::size_t outcomes = p.n_outcomes();
    if (outcomes == 2) return misclassify(m, p);
    const std::size_t parties = qubits_for_dim(outcomes);
    const double keep = 1.0 + m.epsilon / 2.0;
    const double leak = -m.epsilon / 2.0;
    std::vector<double> values = p.values();
    for (std::size_t k = 0; k < parties; ++k) {
        const std::size_t bit = std::size_t{1} << (parties - 1 - k);
        for (std::size_t o = 0; o < outcomes; ++o) {
            if (o & bit) continue;
            const double p0 = values[o];
            const double p1 = values[o | bit];
            values[o] = keep * p0 + leak * p1;
            values[o | bit] = leak * p0 + keep * p1;
        }
    }
    return ProbabilityTable::unchecked(std::move(values));
}

void ThresholdDevice::validate() const {
    if (!(theta >= 0.0)) throw ContractError("threshold must be nonnegative");
}

CountTable threshold_counts(const ThresholdDevice& d, const CountTable& raw) {
    d.validate();
    CountTable out;
    out.counts.reserve(raw.n_outcomes());
    for (double c : raw.counts) out.counts.push_back(d(c));
    out.total = out.sum();
    return out;
}

ProbabilityTable analyze_counts(const CountTable& raw) {
    const double sum = raw.sum();
    if (raw.counts.empty() || sum == 0.0) {
        throw DegenerateDataError("count table has no events to normalize");
    }
    std::vector<double> p;
    p.reserve(raw.n_outcomes());
    for (double c : raw.counts) p.push_back(c / sum);
    return ProbabilityTable::unchecked(std::move(p));
}

AffineMap equivalent_affine(double theta, double trials, std::size_t n_outcomes) {
    if (!(trials > 0.0)) throw ContractError("trial count must be positive");
    if (!(theta >= 0.0)) throw ContractError("threshold must be nonnegative");
    const double removed = static_cast<double>(n_outcomes) * theta;
    if (removed >= trials) {
        throw DeviceSaturatedError("threshold removes every event: N*theta = " +
                                   std::to_string(removed) + " >= T = " + std::to_string(trials));
    }
    return AffineMap(1.0 / (1.0 - removed / trials), n_outcomes);
}

std::string to_string(PipelineMode mode) {
    return mode == PipelineMode::expected ? "expected" : "sampled";
}

PipelineMode parse_pipeline_mode(const std::string& text) {
    if (text == "expected") return PipelineMode::expected;
    if (text == "sampled") return PipelineMode::sampled;
    throw ContractError("unknown pipeline mode '" + text + "'");
}

DistortionPipeline DistortionPipeline::threshold_for(double a, double trials, std::size_t n_outcomes) {
    if (!(a >= 1.0)) throw ContractError("threshold pipelines realize a >= 1 only");
    DistortionPipeline p;
    // a = 1 / (1 - N theta / T)  =>  theta = T (1 - 1/a) / N
    p.theta = trials * (1.0 - 1.0 / a) / static_cast<double>(n_outcomes);
    return p;
}

void DistortionPipeline::validate() const {
    correction.validate();
    MisclassificationModel{epsilon}.validate();
    ThresholdDevice{theta}.validate();
}

bool DistortionPipeline::is_identity() const {
    return correction.s == 1.0 && correction.b == 0.0 && epsilon == 0.0 && theta == 0.0;
}

double DistortionPipeline::affine_factor(double trials, std::size_t n_outcomes,
                                         std::size_t parties) const {
    const double shift = static_cast<double>(n_outcomes) * (correction.b + theta);
    if (shift >= trials) throw DeviceSaturatedError("pipeline removes every event");
    return std::pow(1.0 + epsilon, static_cast<double>(parties)) * trials / (trials - shift);
}

PipelineOutput apply_pipeline(const DistortionPipeline& pipeline, const CountTable& raw) {
    pipeline.validate();
    // Background subtraction alone may drive cells negative; those are carried
    // into the probabilities (and flagged there), never clamped.
    CountTable processed;
    processed.total = raw.total;
    processed.counts.reserve(raw.n_outcomes());
    for (double c : raw.counts) processed.counts.push_back(pipeline.correction(c));

    bool clipped = false;
    if (pipeline.theta > 0.0) {
        // Cells that meet the threshold up to rounding of the expected counts are not clipped.
        const double slack = 1e-9 * std::max(raw.total, 1.0);
        for (double x0 : processed.counts) clipped = clipped || x0 < pipeline.theta - slack;
        processed = threshold_counts(ThresholdDevice{pipeline.theta}, processed);
    }
    ProbabilityTable p = analyze_counts(processed);
    if (pipeline.epsilon != 0.0) p = misclassify_parties(MisclassificationModel{pipeline.epsilon}, p);
    return {std::move(processed), std::move(p), clipped};
}

}  // namespace qaffine
