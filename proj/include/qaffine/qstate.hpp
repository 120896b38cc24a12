// Dense complex linear algebra for small multi-qubit density matrices.
//
// Basis convention: qubit 0 is the leftmost tensor factor and the
// computational basis is enumerated in binary order, so qubit 0 is the most
// significant bit of a basis index (|01> has index 1, |10> has index 2).
#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qaffine {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// Square dense complex matrix stored row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<double>& values);

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }
    const std::vector<Complex>& entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    /// Largest entrywise modulus of M - M^dagger.
    double hermiticity_defect() const;
    /// (M + M^dagger) / 2.
    ComplexMatrix hermitian_part() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Kronecker product, lhs is the left (more significant) factor.
ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Frobenius norm of lhs - rhs.
double frobenius_distance(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Number of qubits for a power-of-two dimension; throws DimensionError otherwise.
std::size_t qubits_for_dim(std::size_t dim);

/// Hermitian, unit-trace, positive-semidefinite matrix over n qubits.
class DensityMatrix {
public:
    /// Validates all three properties; throws InvalidStateError or DimensionError.
    static DensityMatrix from_matrix(ComplexMatrix m);
    /// Skips the numerical checks. Only for matrices that are states by construction.
    static DensityMatrix unchecked(ComplexMatrix m);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

    friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

private:
    DensityMatrix(std::size_t n_qubits, ComplexMatrix m)
        : n_qubits_(n_qubits), matrix_(std::move(m)) {}

    std::size_t n_qubits_ = 0;
    ComplexMatrix matrix_;
};

struct StateReport {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
    bool hermitian = false;
    bool unit_trace = false;
    bool positive = false;

    bool valid() const { return hermitian && unit_trace && positive; }
};

/// Checks every density-matrix property without throwing on failure.
StateReport inspect_state(const ComplexMatrix& m);

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    std::array<double, 3> as_array() const { return {x, y, z}; }
    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// 1/2 (1 + x sx + y sy + z sz); throws InvalidStateError if |v| > 1 + 1e-12.
DensityMatrix density_from_bloch(const BlochVector& v);
/// a_mu = Tr(rho sigma_mu); throws DimensionError for more than one qubit.
BlochVector bloch_from_density(const DensityMatrix& rho);
double purity_norm(const BlochVector& v);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Pauli algebra

enum class Pauli : std::uint8_t { I, X, Y, Z };

char pauli_symbol(Pauli p);
const ComplexMatrix& pauli_matrix(Pauli p);

class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {}
    /// Parses "XIZ"; throws ContractError on other characters.
    static PauliString parse(std::string_view text);
    static PauliString identity(std::size_t n_qubits);

    std::size_t size() const noexcept { return labels_.size(); }
    Pauli operator[](std::size_t k) const { return labels_[k]; }
    const std::vector<Pauli>& labels() const noexcept { return labels_; }
    bool is_identity() const;
    std::string str() const;
    /// Dense tensor product of the labels.
    ComplexMatrix matrix() const;

    friend auto operator<=>(const PauliString&, const PauliString&) = default;

private:
    std::vector<Pauli> labels_;
};

struct PauliDecomposition {
    std::size_t n_qubits = 0;
    /// m = sum_s c_s P_s. Coefficients with |c_s| <= kPauliDropTol are omitted.
    std::map<PauliString, double> coefficients;

    double coefficient(const PauliString& s) const;
};

inline constexpr double kPauliDropTol = 1e-14;

/// c_s = Tr(m P_s) / N. Requires a Hermitian matrix of power-of-two dimension.
PauliDecomposition pauli_decompose(const ComplexMatrix& m);
ComplexMatrix pauli_reconstruct(const PauliDecomposition& d);

// Unitaries and spectra

class UnitaryGate {
public:
    /// Throws ContractError unless U U^dagger = 1 within 1e-10 entrywise.
    explicit UnitaryGate(ComplexMatrix m);

    static UnitaryGate identity(std::size_t n_qubits);
    static UnitaryGate pauli_x();

    std::size_t dim() const noexcept { return matrix_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    ComplexMatrix matrix_;
};

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& u);
/// U m U^dagger for an arbitrary square matrix.
ComplexMatrix conjugate_by(const ComplexMatrix& m, const UnitaryGate& u);

/// Gaussian complex matrix orthonormalized column by column (modified Gram-Schmidt).
UnitaryGate random_unitary(std::uint64_t seed, std::size_t n_qubits);

struct Eigensystem {
    std::vector<double> values;  ///< ascending
    ComplexMatrix vectors;       ///< column k belongs to values[k]

    std::vector<Complex> vector(std::size_t k) const;
};

/// Cyclic Jacobi rotations. Throws ContractError if m is not Hermitian within 1e-10.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);

/// |psi><psi| for psi = (|01> - |10>)/sqrt(2).
DensityMatrix bell_singlet();
DensityMatrix maximally_mixed(std::size_t n_qubits);
/// |psi><psi| for a (not necessarily normalized) state vector.
DensityMatrix pure_state(const std::vector<Complex>& amplitudes);

}  // namespace qaffine
