#include "qaffine/tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qaffine/error.hpp"

namespace qaffine {

ProbabilityTable::ProbabilityTable(std::vector<double> values) : values_(std::move(values)) {
    const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (values_.empty() || std::abs(sum - 1.0) > kProbabilitySumTol) {
        throw ContractError("probability table sums to " + std::to_string(sum));
    }
}

ProbabilityTable ProbabilityTable::unchecked(std::vector<double> values) {
    ProbabilityTable out;
    out.values_ = std::move(values);
    return out;
}

bool ProbabilityTable::negativity_flag() const noexcept {
    return std::any_of(values_.begin(), values_.end(),
                       [](double p) { return p < -kNegativeEntryTol; });
}

double max_abs_difference(const ProbabilityTable& lhs, const ProbabilityTable& rhs) {
    if (lhs.n_outcomes() != rhs.n_outcomes()) {
        throw DimensionError("probability tables differ in size");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < lhs.n_outcomes(); ++k) {
        worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
    }
    return worst;
}

double CountTable::sum() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

CountTable expected_counts(const ProbabilityTable& p, double trials) {
    CountTable out;
    out.total = trials;
    out.counts.reserve(p.n_outcomes());
    for (double v : p.values()) out.counts.push_back(trials * v);
    return out;
}

}  // namespace qaffine
