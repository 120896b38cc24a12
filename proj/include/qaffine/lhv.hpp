// Classical local-hidden-variable source built from a separable decomposition.
//
// A trial draws the hidden term lambda with probability w_lambda; party k then
// answers + (bit 0) with probability 1/2 (1 + m_k . b_{lambda,k}) using only
// its own setting m_k and its own local Bloch vector.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qaffine/measurement.hpp"
#include "qaffine/qstate.hpp"
#include "qaffine/rng.hpp"
#include "qaffine/separability.hpp"
#include "qaffine/tables.hpp"

namespace qaffine {

class HiddenVariableModel {
public:
    /// Throws ContractError on invalid weights or Bloch vectors outside the ball.
    HiddenVariableModel(std::vector<double> weights,
                        std::vector<std::vector<BlochVector>> local_bloch);

    std::size_t n_terms() const noexcept { return weights_.size(); }
    std::size_t n_parties() const noexcept { return n_parties_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<std::vector<BlochVector>>& local_bloch() const noexcept { return local_bloch_; }

    /// Index of the term selected by a uniform u in [0, 1).
    std::size_t term_for(double u) const;

    /// Exact outcome distribution, sum_lambda w_lambda prod_k P(bit_k | lambda).
    ProbabilityTable exact_probabilities(std::span<const MeasurementSetting> settings) const;

    /// sum_lambda w_lambda (tensor_k rho(b_{lambda,k})).
    DensityMatrix mixture_state() const;

private:
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    std::vector<std::vector<BlochVector>> local_bloch_;
    std::size_t n_parties_ = 0;
};

/// Drops a; every factor contributes its unit Bloch vector.
HiddenVariableModel model_from_decomposition(const SeparableDecomposition& d);

struct TrialOutcome {
    std::size_t term = 0;
    std::size_t outcome = 0;
};

/// Number of uniform draws one trial consumes: one for lambda, one per party.
inline std::size_t draws_per_trial(const HiddenVariableModel& m) { return m.n_parties() + 1; }

/// One trial reading the draws [first_draw, first_draw + draws_per_trial(m)).
TrialOutcome sample_trial_at(const HiddenVariableModel& m,
                             std::span<const MeasurementSetting> settings,
                             const RandomStream& rng, std::uint64_t first_draw);

/// Next trial of the stream; advances the stream by draws_per_trial(m).
std::size_t sample_trial(const HiddenVariableModel& m, std::span<const MeasurementSetting> settings,
                         RandomStream& rng);

/// T trials starting at the stream's current position. Batches run on up to
/// `threads` threads (0 = hardware concurrency); the table does not depend on
/// the thread count. Advances the stream past the consumed draws.
CountTable run_trials(const HiddenVariableModel& m, std::span<const MeasurementSetting> settings,
                      std::uint64_t trials, RandomStream& rng, unsigned threads = 0);

}  // namespace qaffine
