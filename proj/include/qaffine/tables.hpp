// Outcome distributions and raw count tables shared by the measurement,
// sampling and distortion layers.
#pragma once

#include <cstddef>
#include <vector>

namespace qaffine {

inline constexpr double kProbabilitySumTol = 1e-9;
inline constexpr double kNegativeEntryTol = 1e-12;

/// Outcome probabilities. Entries may be negative (quasi-probabilities); the
/// sum must be 1 within 1e-9.
class ProbabilityTable {
public:
    ProbabilityTable() = default;
    /// Throws ContractError if the entries do not sum to 1.
    explicit ProbabilityTable(std::vector<double> values);
    /// No sum check. For outputs of exact sum-preserving maps, where the
    /// rounding slack of the input may be amplified.
    static ProbabilityTable unchecked(std::vector<double> values);

    std::size_t n_outcomes() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    /// True iff some entry is below -1e-12.
    bool negativity_flag() const noexcept;

    friend bool operator==(const ProbabilityTable&, const ProbabilityTable&) = default;

private:
    std::vector<double> values_;
};

/// Largest entrywise difference; throws DimensionError on size mismatch.
double max_abs_difference(const ProbabilityTable& lhs, const ProbabilityTable& rhs);

/// Event counts per outcome. Counts are integers for sampled runs and reals
/// in expected-count mode. total is the number of trials T.
struct CountTable {
    std::vector<double> counts;
    double total = 0.0;

    std::size_t n_outcomes() const noexcept { return counts.size(); }
    double sum() const;

    friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// T * p per cell.
CountTable expected_counts(const ProbabilityTable& p, double trials);

}  // namespace qaffine
