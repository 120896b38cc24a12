#include "qaffine/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "qaffine/error.hpp"

namespace qaffine {

namespace {

constexpr double kWeightSumTol = 1e-10;
constexpr double kWeightNegTol = 1e-12;
constexpr double kBlochNormTol = 1e-12;
constexpr std::uint64_t kMinTrialsPerThread = 1U << 16;

void check_arity(const HiddenVariableModel& m, std::span<const MeasurementSetting> settings) {
    if (settings.size() != m.n_parties()) {
        throw DimensionError("model has " + std::to_string(m.n_parties()) + " parties but " +
                             std::to_string(settings.size()) + " settings were given");
    }
}

double plus_probability(const MeasurementSetting& s, const BlochVector& b) {
    const auto& m = s.bloch();
    return 0.5 * (1.0 + m[0] * b.x + m[1] * b.y + m[2] * b.z);
}

}  // namespace

HiddenVariableModel::HiddenVariableModel(std::vector<double> weights,
                                         std::vector<std::vector<BlochVector>> local_bloch)
    : weights_(std::move(weights)), local_bloch_(std::move(local_bloch)) {
    if (weights_.empty() || weights_.size() != local_bloch_.size()) {
        throw ContractError("hidden variable model needs one Bloch list per weight");
    }
    n_parties_ = local_bloch_.front().size();
    if (n_parties_ == 0) throw ContractError("hidden variable model needs at least one party");
    for (const auto& term : local_bloch_) {
        if (term.size() != n_parties_) throw ContractError("terms have different party counts");
        for (const auto& b : term) {
            if (purity_norm(b) > 1.0 + kBlochNormTol) {
                throw ContractError("local Bloch vector outside the unit ball");
            }
        }
    }
    double sum = 0.0;
    for (double& w : weights_) {
        if (w < -kWeightNegTol) throw ContractError("negative hidden variable weight");
        w = std::max(w, 0.0);
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol) {
        throw ContractError("hidden variable weights sum to " + std::to_string(sum));
    }
    cumulative_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

std::size_t HiddenVariableModel::term_for(double u) const {
    // Scale by the actual total so rounding in the weights never leaves a gap at the top.
    const double target = u * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

ProbabilityTable HiddenVariableModel::exact_probabilities(
    std::span<const MeasurementSetting> settings) const {
    check_arity(*this, settings);
    const std::size_t n = n_parties_;
    const std::size_t outcomes = std::size_t{1} << n;
    std::vector<double> probs(outcomes, 0.0);
    for (std::size_t t = 0; t < weights_.size(); ++t) {
        std::vector<double> plus(n);
        for (std::size_t k = 0; k < n; ++k) plus[k] = plus_probability(settings[k], local_bloch_[t][k]);
        for (std::size_t o = 0; o < outcomes; ++o) {
            double p = weights_[t];
            for (std::size_t k = 0; k < n; ++k) {
                const bool minus = (o >> (n - 1 - k)) & 1U;
                p *= minus ? 1.0 - plus[k] : plus[k];
            }
            probs[o] += p;
        }
    }
    return ProbabilityTable(std::move(probs));
}

DensityMatrix HiddenVariableModel::mixture_state() const {
    const std::size_t dim = std::size_t{1} << n_parties_;
    ComplexMatrix out(dim);
    for (std::size_t t = 0; t < weights_.size(); ++t) {
        ComplexMatrix product = ComplexMatrix::identity(1);
        for (const auto& b : local_bloch_[t]) product = kron(product, density_from_bloch(b).matrix());
        out += product * Complex{weights_[t]};
    }
    return DensityMatrix::unchecked(std::move(out));
}

HiddenVariableModel model_from_decomposition(const SeparableDecomposition& d) {
    std::vector<double> weights;
    std::vector<std::vector<BlochVector>> bloch;
    weights.reserve(d.terms.size());
    bloch.reserve(d.terms.size());
    for (const auto& t : d.terms) {
        weights.push_back(t.weight);
        std::vector<BlochVector> local;
        local.reserve(t.factors.size());
        for (const auto& f : t.factors) local.push_back(f.bloch());
        bloch.push_back(std::move(local));
    }
    return HiddenVariableModel(std::move(weights), std::move(bloch));
}

TrialOutcome sample_trial_at(const HiddenVariableModel& m,
                             std::span<const MeasurementSetting> settings,
                             const RandomStream& rng, std::uint64_t first_draw) {
    check_arity(m, settings);
    const std::size_t n = m.n_parties();
    TrialOutcome out;
    out.term = m.term_for(rng.uniform_at(first_draw));
    const auto& local = m.local_bloch()[out.term];
    for (std::size_t k = 0; k < n; ++k) {
        const bool minus = rng.uniform_at(first_draw + 1 + k) >= plus_probability(settings[k], local[k]);
        if (minus) out.outcome |= std::size_t{1} << (n - 1 - k);
    }
    return out;
}

std::size_t sample_trial(const HiddenVariableModel& m, std::span<const MeasurementSetting> settings,
                         RandomStream& rng) {
    const std::uint64_t first = rng.counter();
    const TrialOutcome out = sample_trial_at(m, settings, rng, first);
    rng.seek(first + draws_per_trial(m));
    return out.outcome;
}

CountTable run_trials(const HiddenVariableModel& m, std::span<const MeasurementSetting> settings,
                      std::uint64_t trials, RandomStream& rng, unsigned threads) {
    check_arity(m, settings);
    if (trials == 0) throw ContractError("run_trials needs at least one trial");
    const std::size_t outcomes = std::size_t{1} << m.n_parties();
    const std::uint64_t stride = draws_per_trial(m);
    const std::uint64_t start = rng.counter();

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    const std::uint64_t max_batches = std::max<std::uint64_t>(1, trials / kMinTrialsPerThread);
    const auto batches = static_cast<unsigned>(std::min<std::uint64_t>(threads, max_batches));

    std::vector<std::vector<std::uint64_t>> partial(batches, std::vector<std::uint64_t>(outcomes, 0));
    const auto run_batch = [&](unsigned b) {
        const std::uint64_t lo = trials * b / batches;
        const std::uint64_t hi = trials * (b + 1) / batches;
        auto& counts = partial[b];
        for (std::uint64_t t = lo; t < hi; ++t) {
            ++counts[sample_trial_at(m, settings, rng, start + t * stride).outcome];
        }
    };
    if (batches == 1) {
        run_batch(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(batches);
        for (unsigned b = 0; b < batches; ++b) workers.emplace_back(run_batch, b);
    }

    CountTable out;
    out.total = static_cast<double>(trials);
    out.counts.assign(outcomes, 0.0);
    for (const auto& counts : partial) {
        for (std::size_t o = 0; o < outcomes; ++o) out.counts[o] += static_cast<double>(counts[o]);
    }
    rng.seek(start + trials * stride);
    return out;
}

}  // namespace qaffine
