// Projective product-basis measurements and two-party correlators.
//
// Outcome index layout: the outcome bit of qubit k sits at the same position
// as qubit k in a computational basis index (qubit 0 is the most significant
// bit), and the bit is 0 for the +m projector. Measuring every qubit along z
// therefore yields the diagonal of rho in basis order.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "qaffine/qstate.hpp"
#include "qaffine/tables.hpp"

namespace qaffine {

/// Unit Bloch direction m of a two-outcome measurement {1/2(1+m.s), 1/2(1-m.s)}.
class MeasurementSetting {
public:
    /// Throws ContractError unless |m| = 1 within 1e-10.
    explicit MeasurementSetting(const std::array<double, 3>& bloch);
    /// Direction at angle theta from +z towards +x, i.e. (sin theta, 0, cos theta).
    static MeasurementSetting in_xz_plane(double theta);
    static MeasurementSetting along_z() { return in_xz_plane(0.0); }

    const std::array<double, 3>& bloch() const noexcept { return bloch_; }
    /// 1/2 (1 + sign m.sigma), sign = +1 or -1.
    ComplexMatrix projector(int sign) const;

    friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;

private:
    std::array<double, 3> bloch_;
};

/// p_k = Tr(rho Pi_k) over the 2^n product projectors. rho only needs to be
/// Hermitian with unit trace; non-positive input yields flagged negative
/// entries.
ProbabilityTable projective_probabilities(const ComplexMatrix& rho,
                                          std::span<const MeasurementSetting> settings);
inline ProbabilityTable projective_probabilities(const DensityMatrix& rho,
                                                 std::span<const MeasurementSetting> settings) {
    return projective_probabilities(rho.matrix(), settings);
}

/// E = p00 - p01 - p10 + p11 for a four-outcome table.
double correlation(const ProbabilityTable& p);

/// Quantum reference -cos(theta) for the singlet at relative angle theta.
double singlet_correlation(double theta);

}  // namespace qaffine
