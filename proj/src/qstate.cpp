#include "qaffine/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "qaffine/error.hpp"

namespace qaffine {

namespace {

constexpr Complex kI{0.0, 1.0};

constexpr double kBlochTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kEigenHermitianTol = 1e-10;
constexpr double kJacobiOffDiagTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void require_same_dim(const ComplexMatrix& lhs, const ComplexMatrix& rhs, const char* what) {
    if (lhs.dim() != rhs.dim()) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << lhs.dim() << " vs " << rhs.dim() << ")";
        throw DimensionError(msg.str());
    }
}

double off_diagonal_norm(const ComplexMatrix& m) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            if (r != c) sum += std::norm(m(r, c));
        }
    }
    return std::sqrt(sum);
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw DimensionError("ComplexMatrix: dimension must be at least 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw DimensionError("ComplexMatrix: dimension must be at least 1");
    if (data_.size() != dim * dim) {
        throw DimensionError("ComplexMatrix: expected " + std::to_string(dim * dim) +
                             " entries, got " + std::to_string(data_.size()));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimensionError("ComplexMatrix: ragged initializer");
        std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
        ++r;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t k = 0; k < dim; ++k) m(k, k) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& values) {
    ComplexMatrix m(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) m(k, k) = values[k];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex sum{};
    for (std::size_t k = 0; k < dim_; ++k) sum += (*this)(k, k);
    return sum;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& z : data_) sum += std::norm(z);
    return std::sqrt(sum);
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
        }
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    require_same_dim(lhs, rhs, "operator*");
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(r, k);
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    const std::size_t m = lhs.dim();
    const std::size_t n = rhs.dim();
    ComplexMatrix out(m * n);
    for (std::size_t r1 = 0; r1 < m; ++r1) {
        for (std::size_t c1 = 0; c1 < m; ++c1) {
            const Complex a = lhs(r1, c1);
            for (std::size_t r2 = 0; r2 < n; ++r2) {
                for (std::size_t c2 = 0; c2 < n; ++c2) {
                    out(r1 * n + r2, c1 * n + c2) = a * rhs(r2, c2);
                }
            }
        }
    }
    return out;
}

double frobenius_distance(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    return (lhs - rhs).frobenius_norm();
}

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

// ---------------------------------------------------------------------------
// DensityMatrix

StateReport inspect_state(const ComplexMatrix& m) {
    StateReport report;
    report.hermiticity_defect = m.hermiticity_defect();
    report.trace_defect = std::abs(m.trace() - Complex{1.0, 0.0});
    report.hermitian = report.hermiticity_defect <= kHermitianTol;
    report.unit_trace = report.trace_defect <= kTraceTol;
    // The spectrum of the Hermitian part is meaningful even for slightly
    // non-Hermitian input; the report flags that separately.
    report.min_eigenvalue = hermitian_eigensystem(m.hermitian_part()).values.front();
    report.positive = report.min_eigenvalue >= -kPsdTol;
    return report;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
    const std::size_t n = qubits_for_dim(m.dim());
    const StateReport report = inspect_state(m);
    if (!report.hermitian) {
        throw InvalidStateError("matrix is not Hermitian (defect " +
                                std::to_string(report.hermiticity_defect) + ")");
    }
    if (!report.unit_trace) {
        throw InvalidStateError("trace differs from 1 by " + std::to_string(report.trace_defect));
    }
    if (!report.positive) {
        throw InvalidStateError("matrix has negative eigenvalue " +
                                std::to_string(report.min_eigenvalue));
    }
    return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
    const std::size_t n = qubits_for_dim(m.dim());
    return DensityMatrix(n, std::move(m));
}

// ---------------------------------------------------------------------------
// Bloch representation

DensityMatrix density_from_bloch(const BlochVector& v) {
    const double norm = purity_norm(v);
    if (norm > 1.0 + kBlochTol) {
        throw InvalidStateError("Bloch vector norm " + std::to_string(norm) + " exceeds 1");
    }
    ComplexMatrix m{{0.5 * (1.0 + v.z), 0.5 * Complex{v.x, -v.y}},
                    {0.5 * Complex{v.x, v.y}, 0.5 * (1.0 - v.z)}};
    return DensityMatrix::unchecked(std::move(m));
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
    if (rho.n_qubits() != 1) {
        throw DimensionError("bloch_from_density: expected one qubit, got " +
                             std::to_string(rho.n_qubits()));
    }
    const auto& m = rho.matrix();
    // Tr(rho sx) = 2 Re rho01, Tr(rho sy) = -2 Im rho01, Tr(rho sz) = rho00 - rho11.
    return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

double purity_norm(const BlochVector& v) { return std::hypot(v.x, v.y, v.z); }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// Pauli algebra

char pauli_symbol(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

const ComplexMatrix& pauli_matrix(Pauli p) {
    static const ComplexMatrix id{{1.0, 0.0}, {0.0, 1.0}};
    static const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
    static const ComplexMatrix sy{{0.0, -kI}, {kI, 0.0}};
    static const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
    switch (p) {
        case Pauli::I: return id;
        case Pauli::X: return sx;
        case Pauli::Y: return sy;
        case Pauli::Z: return sz;
    }
    return id;
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> labels;
    labels.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case 'I': labels.push_back(Pauli::I); break;
            case 'X': labels.push_back(Pauli::X); break;
            case 'Y': labels.push_back(Pauli::Y); break;
            case 'Z': labels.push_back(Pauli::Z); break;
            default:
                throw ContractError(std::string("invalid Pauli label '") + ch + "'");
        }
    }
    return PauliString(std::move(labels));
}

PauliString PauliString::identity(std::size_t n_qubits) {
    return PauliString(std::vector<Pauli>(n_qubits, Pauli::I));
}

bool PauliString::is_identity() const {
    return std::all_of(labels_.begin(), labels_.end(), [](Pauli p) { return p == Pauli::I; });
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(labels_.size());
    for (Pauli p : labels_) out.push_back(pauli_symbol(p));
    return out;
}

ComplexMatrix PauliString::matrix() const {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (Pauli p : labels_) out = kron(out, pauli_matrix(p));
    return out;
}

double PauliDecomposition::coefficient(const PauliString& s) const {
    auto it = coefficients.find(s);
    return it == coefficients.end() ? 0.0 : it->second;
}

namespace {

// A Pauli string is a signed permutation matrix: row j has its single
// nonzero entry at column j ^ flip_mask.
struct SparsePauli {
    std::size_t flip_mask = 0;
    std::vector<Complex> row_phase;
};

SparsePauli sparse_pauli(const PauliString& s) {
    const std::size_t n = s.size();
    const std::size_t dim = std::size_t{1} << n;
    SparsePauli out;
    for (std::size_t k = 0; k < n; ++k) {
        if (s[k] == Pauli::X || s[k] == Pauli::Y) out.flip_mask |= std::size_t{1} << (n - 1 - k);
    }
    out.row_phase.assign(dim, Complex{1.0, 0.0});
    for (std::size_t row = 0; row < dim; ++row) {
        Complex phase{1.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const bool bit = (row >> (n - 1 - k)) & 1U;
            switch (s[k]) {
                case Pauli::I:
                case Pauli::X: break;
                case Pauli::Y: phase *= bit ? kI : -kI; break;
                case Pauli::Z: phase *= bit ? -1.0 : 1.0; break;
            }
        }
        out.row_phase[row] = phase;
    }
    return out;
}

PauliString pauli_from_index(std::size_t index, std::size_t n) {
    std::vector<Pauli> labels(n);
    for (std::size_t k = 0; k < n; ++k) {
        labels[n - 1 - k] = static_cast<Pauli>(index & 3U);
        index >>= 2;
    }
    return PauliString(std::move(labels));
}

}  // namespace

PauliDecomposition pauli_decompose(const ComplexMatrix& m) {
    const std::size_t n = qubits_for_dim(m.dim());
    if (m.hermiticity_defect() > kEigenHermitianTol) {
        throw ContractError("pauli_decompose: matrix is not Hermitian");
    }
    const std::size_t dim = m.dim();
    const std::size_t count = std::size_t{1} << (2 * n);
    PauliDecomposition out;
    out.n_qubits = n;
    for (std::size_t index = 0; index < count; ++index) {
        PauliString s = pauli_from_index(index, n);
        const SparsePauli p = sparse_pauli(s);
        // Tr(m P) = sum_j m(j ^ mask, j) P(j, j ^ mask)
        Complex trace{};
        for (std::size_t j = 0; j < dim; ++j) trace += m(j ^ p.flip_mask, j) * p.row_phase[j];
        const double c = trace.real() / static_cast<double>(dim);
        if (std::abs(c) > kPauliDropTol) out.coefficients.emplace(std::move(s), c);
    }
    return out;
}

ComplexMatrix pauli_reconstruct(const PauliDecomposition& d) {
    const std::size_t dim = std::size_t{1} << d.n_qubits;
    ComplexMatrix out(dim);
    for (const auto& [s, c] : d.coefficients) {
        if (s.size() != d.n_qubits) {
            throw DimensionError("pauli_reconstruct: string " + s.str() + " has wrong length");
        }
        const SparsePauli p = sparse_pauli(s);
        for (std::size_t row = 0; row < dim; ++row) out(row, row ^ p.flip_mask) += c * p.row_phase[row];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unitaries

UnitaryGate::UnitaryGate(ComplexMatrix m) : matrix_(std::move(m)) {
    const ComplexMatrix product = matrix_ * matrix_.adjoint();
    const std::size_t n = matrix_.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const Complex expected = r == c ? 1.0 : 0.0;
            if (std::abs(product(r, c) - expected) > kUnitaryTol) {
                throw ContractError("matrix is not unitary");
            }
        }
    }
}

UnitaryGate UnitaryGate::identity(std::size_t n_qubits) {
    return UnitaryGate(ComplexMatrix::identity(std::size_t{1} << n_qubits));
}

UnitaryGate UnitaryGate::pauli_x() { return UnitaryGate(pauli_matrix(Pauli::X)); }

ComplexMatrix conjugate_by(const ComplexMatrix& m, const UnitaryGate& u) {
    require_same_dim(m, u.matrix(), "conjugate_by");
    return u.matrix() * m * u.matrix().adjoint();
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& u) {
    return DensityMatrix::unchecked(conjugate_by(rho.matrix(), u));
}

UnitaryGate random_unitary(std::uint64_t seed, std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss;
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = Complex{gauss(engine), gauss(engine)};
    }
    // Modified Gram-Schmidt over columns.
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex overlap{};
            for (std::size_t r = 0; r < dim; ++r) overlap += std::conj(m(r, prev)) * m(r, c);
            for (std::size_t r = 0; r < dim; ++r) m(r, c) -= overlap * m(r, prev);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) norm += std::norm(m(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < dim; ++r) m(r, c) /= norm;
    }
    return UnitaryGate(std::move(m));
}

// ---------------------------------------------------------------------------
// Eigensystem

std::vector<Complex> Eigensystem::vector(std::size_t k) const {
    std::vector<Complex> out(vectors.dim());
    for (std::size_t r = 0; r < vectors.dim(); ++r) out[r] = vectors(r, k);
    return out;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
    if (m.hermiticity_defect() > kEigenHermitianTol) {
        throw ContractError("hermitian_eigensystem: matrix is not Hermitian");
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= kJacobiOffDiagTol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex beta = a(p, q);
                const double mag = std::abs(beta);
                if (mag == 0.0) continue;
                // Block [[alpha, beta], [beta*, gamma]] = D M D^dagger with
                // D = diag(e^{i phi}, 1) and M real symmetric with off-diagonal |beta|.
                const Complex phase = beta / mag;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double theta = (gamma - alpha) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = D R with R = [[c, s], [-s, c]]
                const Complex g_pp = phase * c;
                const Complex g_pq = phase * s;
                const Complex g_qp = -s;
                const Complex g_qq = c;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * g_pp + akq * g_qp;
                    a(k, q) = akp * g_pq + akq * g_qq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
                    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Eigensystem out;
    out.values.reserve(n);
    out.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]).real());
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Named states

DensityMatrix bell_singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return pure_state({0.0, r, -r, 0.0});
}

DensityMatrix maximally_mixed(std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    return DensityMatrix::unchecked(ComplexMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim)});
}

DensityMatrix pure_state(const std::vector<Complex>& amplitudes) {
    const std::size_t dim = amplitudes.size();
    qubits_for_dim(dim);
    double norm = 0.0;
    for (const auto& z : amplitudes) norm += std::norm(z);
    if (norm == 0.0) throw ContractError("pure_state: zero vector");
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = amplitudes[r] * std::conj(amplitudes[c]) / norm;
    }
    return DensityMatrix::unchecked(std::move(m));
}

}  // namespace qaffine
