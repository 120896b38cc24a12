// Constructive separable decompositions over tensor products of the six
// single-qubit axis projectors 1/2(1 +- sigma_mu).
//
// Any n-qubit state rho is written as sum_T c_T T - x 1 with c_T >= 0 and T
// ranging over products of axis projectors. Then
//     sigma = (rho + x 1) / (1 + N x)
// is separable and rho = A_a(sigma) with a = N x + 1.
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qaffine/qstate.hpp"

namespace qaffine {

enum class Axis : std::uint8_t { X, Y, Z };

struct AxisProjector {
    Axis axis = Axis::Z;
    bool plus = true;

    /// The other eigenprojector of the same axis.
    AxisProjector flipped() const { return {axis, !plus}; }
    /// Unit Bloch vector +-e_axis.
    BlochVector bloch() const;
    /// "z+", "x-", ...
    std::string label() const;
    static AxisProjector parse(std::string_view text);

    friend auto operator<=>(const AxisProjector&, const AxisProjector&) = default;
};

/// 1/2 (1 +- sigma_axis).
DensityMatrix projector_matrix(const AxisProjector& p);

using ProductFactors = std::vector<AxisProjector>;

/// Dense matrix of the tensor product of the factors (qubit 0 leftmost).
ComplexMatrix product_matrix(const ProductFactors& factors);

struct ProductTerm {
    double coefficient = 0.0;
    ProductFactors factors;

    friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

inline constexpr double kTermDropTol = 1e-12;

/// Merges terms with identical factor lists and drops |c| <= 1e-12. The
/// result is sorted lexicographically by factors.
std::vector<ProductTerm> consolidate(const std::vector<ProductTerm>& terms);

/// sum_T c_T T as a dense matrix.
ComplexMatrix sum_terms(const std::vector<ProductTerm>& terms, std::size_t n_qubits);

/// Identity coefficient split off a Pauli decomposition.
struct IdentitySplit {
    double identity_coefficient = 0.0;
    PauliDecomposition rest;
};

IdentitySplit split_identity(const PauliDecomposition& d);

/// Rewrites every Pauli string factor by factor, sigma_mu = rho_mu^+ - rho_mu^-
/// and 1 = rho_z^+ + rho_z^-, then consolidates.
std::vector<ProductTerm> product_basis_expand(const PauliDecomposition& d);

struct EliminationResult {
    std::vector<ProductTerm> terms;  ///< all coefficients >= 0
    double identity_deficit = 0.0;   ///< x >= 0

    /// sum_T c_T T - x 1
    ComplexMatrix reconstruct(std::size_t n_qubits) const;
};

/// Replaces each negative term -alpha T (all of them at once, as present on
/// entry) by alpha times the other 2^n - 1 products on T's axes, charging
/// alpha to the identity account. identity_mass is a coefficient on 1 already
/// present in the input; the account nets it against the charges and, if
/// identity mass is left over, expands it along z. Input matrix is
/// sum terms + identity_mass 1.
EliminationResult eliminate_negatives(const std::vector<ProductTerm>& terms,
                                      double identity_mass = 0.0);

/// a = N x + 1; throws ContractError for x < 0.
double affine_parameter_from_deficit(double x, std::size_t dim);

struct WeightedProduct {
    double weight = 0.0;
    ProductFactors factors;
};

struct SeparableDecomposition {
    std::size_t n_qubits = 0;
    std::vector<WeightedProduct> terms;
    double a = 1.0;  ///< rho = A_a(sigma)

    /// sigma = sum_mu lambda_mu (tensor of factors)
    DensityMatrix separable_state() const;
    double weight_sum() const;
    double min_weight() const;
};

/// The full pipeline pauli_decompose -> product_basis_expand ->
/// eliminate_negatives -> normalize.
SeparableDecomposition separate(const DensityMatrix& rho);

/// The six-term decomposition 1/6 sum_mu (rho_mu^+ rho_mu^- + rho_mu^- rho_mu^+)
/// with a = 3, which maps onto the singlet.
SeparableDecomposition qdice_decomposition();

/// sigma of qdice_decomposition as a state.
DensityMatrix qdice_sigma();

/// Smallest eigenvalue of rho with the second qubit transposed.
double partial_transpose_min_eigenvalue(const DensityMatrix& rho);

inline constexpr double kPptTol = 1e-10;

/// Smallest a >= 1 such that A_{1/a}(rho) has a positive partial transpose,
/// found by bisection on [1, 4^n] to within tol. Two qubits only.
double minimal_mixing_parameter(const DensityMatrix& rho, double tol = 1e-6);

}  // namespace qaffine
