// The affine family rho -> a rho + (1 - a) 1/N and its consequences for
// unitary evolution, measurement statistics and pseudo-pure states.
#pragma once

#include <cstddef>
#include <optional>

#include "qaffine/qstate.hpp"
#include "qaffine/tables.hpp"

namespace qaffine {

class AffineMap {
public:
    /// Throws ContractError unless a > 0 and dim >= 1.
    AffineMap(double a, std::size_t dim);

    double a() const noexcept { return a_; }
    std::size_t dim() const noexcept { return dim_; }

    /// A_a^{-1} = A_{1/a}.
    AffineMap inverse() const { return AffineMap(1.0 / a_, dim_); }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;

private:
    double a_;
    std::size_t dim_;
};

inline AffineMap affine_inverse(const AffineMap& map) { return map.inverse(); }

/// a rho + (1 - a) 1/N. Hermitian and trace-preserving, but for a > 1 the
/// result need not be positive, so it is returned as a plain matrix.
ComplexMatrix affine_apply(const AffineMap& map, const ComplexMatrix& rho);
inline ComplexMatrix affine_apply(const AffineMap& map, const DensityMatrix& rho) {
    return affine_apply(map, rho.matrix());
}

/// p'_k = a p_k - (a - 1)/N. Negative entries are kept and flagged.
ProbabilityTable transform_probabilities(const AffineMap& map, const ProbabilityTable& p);

/// Frobenius norm of A_a(U rho U^dagger) - U A_a(rho) U^dagger.
double check_commutation(const DensityMatrix& rho, const UnitaryGate& u, double a);

inline constexpr double kDegeneracyTol = 1e-8;

struct PseudoPureSplit {
    double a = 1.0;
    DensityMatrix pure_state;

    /// (1/a) pure + (1 - 1/a) 1/N
    ComplexMatrix reconstruct() const;
};

/// Detects rho = (1/a) |psi><psi| + (1 - 1/a) 1/N: the lowest N-1 eigenvalues
/// must coincide within 1e-8 and the top one must be separated from them.
std::optional<PseudoPureSplit> pseudo_pure_split(const DensityMatrix& rho);

}  // namespace qaffine
