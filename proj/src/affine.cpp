#include "qaffine/affine.hpp"

#include <cmath>
#include <string>

#include "qaffine/error.hpp"

namespace qaffine {

AffineMap::AffineMap(double a, std::size_t dim) : a_(a), dim_(dim) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ContractError("affine parameter must be positive, got " + std::to_string(a));
    }
    if (dim == 0) throw ContractError("affine map dimension must be at least 1");
}

ComplexMatrix affine_apply(const AffineMap& map, const ComplexMatrix& rho) {
    if (rho.dim() != map.dim()) {
        throw DimensionError("affine_apply: map has dimension " + std::to_string(map.dim()) +
                             ", matrix has " + std::to_string(rho.dim()));
    }
    const double a = map.a();
    ComplexMatrix out = rho * Complex{a};
    const double shift = (1.0 - a) / static_cast<double>(map.dim());
    for (std::size_t k = 0; k < out.dim(); ++k) out(k, k) += shift;
    return out;
}

ProbabilityTable transform_probabilities(const AffineMap& map, const ProbabilityTable& p) {
    if (p.n_outcomes() != map.dim()) {
        throw DimensionError("transform_probabilities: table has " + std::to_string(p.n_outcomes()) +
                             " outcomes, map dimension is " + std::to_string(map.dim()));
    }
    const double a = map.a();
    const double shift = (a - 1.0) / static_cast<double>(map.dim());
    std::vector<double> out;
    out.reserve(p.n_outcomes());
    for (double pk : p.values()) out.push_back(a * pk - shift);
    return ProbabilityTable::unchecked(std::move(out));
}

double check_commutation(const DensityMatrix& rho, const UnitaryGate& u, double a) {
    const AffineMap map(a, rho.dim());
    const ComplexMatrix right_then_down = affine_apply(map, conjugate_by(rho.matrix(), u));
    const ComplexMatrix down_then_right = conjugate_by(affine_apply(map, rho.matrix()), u);
    return frobenius_distance(right_then_down, down_then_right);
}

ComplexMatrix PseudoPureSplit::reconstruct() const {
    const std::size_t dim = pure_state.dim();
    const ComplexMatrix mixed =
        ComplexMatrix::identity(dim) * Complex{(1.0 - 1.0 / a) / static_cast<double>(dim)};
    return pure_state.matrix() * Complex{1.0 / a} + mixed;
}

std::optional<PseudoPureSplit> pseudo_pure_split(const DensityMatrix& rho) {
    const std::size_t dim = rho.dim();
    if (dim < 2) return std::nullopt;
    const Eigensystem eig = hermitian_eigensystem(rho.matrix());
    const double lambda_min = eig.values.front();
    const double lambda_max = eig.values.back();
    if (eig.values[dim - 2] - lambda_min > kDegeneracyTol) return std::nullopt;
    if (lambda_max - eig.values[dim - 2] <= kDegeneracyTol) return std::nullopt;
    return PseudoPureSplit{1.0 / (lambda_max - lambda_min), pure_state(eig.vector(dim - 1))};
}

}  // namespace qaffine
