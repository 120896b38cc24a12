#include "qaffine/measurement.hpp"

#include <cmath>
#include <string>

#include "qaffine/error.hpp"

namespace qaffine {

namespace {
constexpr double kUnitNormTol = 1e-10;
}

MeasurementSetting::MeasurementSetting(const std::array<double, 3>& bloch) : bloch_(bloch) {
    const double norm = std::hypot(bloch[0], bloch[1], bloch[2]);
    if (std::abs(norm - 1.0) > kUnitNormTol) {
        throw ContractError("measurement direction must be a unit vector, norm is " +
                            std::to_string(norm));
    }
}

MeasurementSetting MeasurementSetting::in_xz_plane(double theta) {
    return MeasurementSetting({std::sin(theta), 0.0, std::cos(theta)});
}

ComplexMatrix MeasurementSetting::projector(int sign) const {
    const double s = sign >= 0 ? 0.5 : -0.5;
    const auto [x, y, z] = bloch_;
    return ComplexMatrix{{0.5 + s * z, s * Complex{x, -y}}, {s * Complex{x, y}, 0.5 - s * z}};
}

ProbabilityTable projective_probabilities(const ComplexMatrix& rho,
                                          std::span<const MeasurementSetting> settings) {
    const std::size_t n = settings.size();
    if (n == 0 || rho.dim() != (std::size_t{1} << n)) {
        throw DimensionError("projective_probabilities: " + std::to_string(n) +
                             " settings for a matrix of dimension " + std::to_string(rho.dim()));
    }
    if (rho.hermiticity_defect() > 1e-10) {
        throw ContractError("projective_probabilities: input is not Hermitian");
    }
    const std::size_t dim = rho.dim();
    std::vector<std::array<ComplexMatrix, 2>> local;
    local.reserve(n);
    for (const auto& s : settings) local.push_back({s.projector(+1), s.projector(-1)});

    std::vector<double> probs(dim);
    for (std::size_t outcome = 0; outcome < dim; ++outcome) {
        // Pi(r, c) = prod_k P_k(r_k, c_k); Tr(rho Pi) = sum_{r,c} rho(r, c) Pi(c, r)
        Complex acc{};
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                Complex pi{1.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t shift = n - 1 - k;
                    const std::size_t bit = (outcome >> shift) & 1U;
                    pi *= local[k][bit]((c >> shift) & 1U, (r >> shift) & 1U);
                }
                acc += rho(r, c) * pi;
            }
        }
        probs[outcome] = acc.real();
    }
    return ProbabilityTable(std::move(probs));
}

double correlation(const ProbabilityTable& p) {
    if (p.n_outcomes() != 4) {
        throw DimensionError("correlation needs 4 outcomes, got " + std::to_string(p.n_outcomes()));
    }
    return p[0] - p[1] - p[2] + p[3];
}

double singlet_correlation(double theta) { return -std::cos(theta); }

}  // namespace qaffine
