#include "qaffine/separability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "qaffine/affine.hpp"
#include "qaffine/error.hpp"

namespace qaffine {

namespace {

using TermMap = std::map<ProductFactors, double>;

Pauli pauli_for(Axis axis) {
    switch (axis) {
        case Axis::X: return Pauli::X;
        case Axis::Y: return Pauli::Y;
        case Axis::Z: return Pauli::Z;
    }
    return Pauli::Z;
}

TermMap to_map(const std::vector<ProductTerm>& terms) {
    TermMap map;
    for (const auto& t : terms) map[t.factors] += t.coefficient;
    return map;
}

std::vector<ProductTerm> from_map(const TermMap& map) {
    std::vector<ProductTerm> out;
    for (const auto& [factors, c] : map) {
        if (std::abs(c) > kTermDropTol) out.push_back({c, factors});
    }
    return out;
}

// Adds `amount` to all 2^n products over the given axes (one per qubit).
void add_to_axis_family(TermMap& map, const std::vector<Axis>& axes, double amount) {
    const std::size_t n = axes.size();
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t signs = 0; signs < count; ++signs) {
        ProductFactors f(n);
        for (std::size_t k = 0; k < n; ++k) {
            f[k] = {axes[k], ((signs >> (n - 1 - k)) & 1U) == 0};
        }
        map[f] += amount;
    }
}

std::size_t checked_qubits(const std::vector<ProductTerm>& terms) {
    const std::size_t n = terms.empty() ? 0 : terms.front().factors.size();
    for (const auto& t : terms) {
        if (t.factors.size() != n) throw DimensionError("product terms over different qubit counts");
    }
    return n;
}

}  // namespace

BlochVector AxisProjector::bloch() const {
    const double s = plus ? 1.0 : -1.0;
    switch (axis) {
        case Axis::X: return {s, 0.0, 0.0};
        case Axis::Y: return {0.0, s, 0.0};
        case Axis::Z: return {0.0, 0.0, s};
    }
    return {};
}

std::string AxisProjector::label() const {
    static constexpr std::array<char, 3> names{'x', 'y', 'z'};
    return {names[static_cast<std::size_t>(axis)], plus ? '+' : '-'};
}

AxisProjector AxisProjector::parse(std::string_view text) {
    if (text.size() != 2 || (text[1] != '+' && text[1] != '-')) {
        throw ContractError("invalid axis projector label '" + std::string(text) + "'");
    }
    AxisProjector p;
    switch (text[0]) {
        case 'x': p.axis = Axis::X; break;
        case 'y': p.axis = Axis::Y; break;
        case 'z': p.axis = Axis::Z; break;
        default: throw ContractError("invalid axis projector label '" + std::string(text) + "'");
    }
    p.plus = text[1] == '+';
    return p;
}

DensityMatrix projector_matrix(const AxisProjector& p) {
    ComplexMatrix m = ComplexMatrix::identity(2) + pauli_matrix(pauli_for(p.axis)) * Complex{p.plus ? 1.0 : -1.0};
    return DensityMatrix::unchecked(m * Complex{0.5});
}

ComplexMatrix product_matrix(const ProductFactors& factors) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (const auto& f : factors) out = kron(out, projector_matrix(f).matrix());
    return out;
}

std::vector<ProductTerm> consolidate(const std::vector<ProductTerm>& terms) {
    checked_qubits(terms);
    return from_map(to_map(terms));
}

ComplexMatrix sum_terms(const std::vector<ProductTerm>& terms, std::size_t n_qubits) {
    ComplexMatrix out(std::size_t{1} << n_qubits);
    for (const auto& t : terms) {
        if (t.factors.size() != n_qubits) throw DimensionError("sum_terms: qubit count mismatch");
        out += product_matrix(t.factors) * Complex{t.coefficient};
    }
    return out;
}

IdentitySplit split_identity(const PauliDecomposition& d) {
    IdentitySplit out;
    out.rest.n_qubits = d.n_qubits;
    for (const auto& [s, c] : d.coefficients) {
        if (s.is_identity()) {
            out.identity_coefficient += c;
        } else {
            out.rest.coefficients.emplace(s, c);
        }
    }
    return out;
}

std::vector<ProductTerm> product_basis_expand(const PauliDecomposition& d) {
    const std::size_t n = d.n_qubits;
    const std::size_t branches = std::size_t{1} << n;
    TermMap map;
    for (const auto& [s, c] : d.coefficients) {
        if (s.size() != n) throw DimensionError("Pauli string " + s.str() + " has wrong length");
        for (std::size_t choice = 0; choice < branches; ++choice) {
            ProductFactors f(n);
            double coefficient = c;
            for (std::size_t k = 0; k < n; ++k) {
                const bool minus = ((choice >> (n - 1 - k)) & 1U) != 0;
                switch (s[k]) {
                    case Pauli::I: f[k] = {Axis::Z, !minus}; break;
                    case Pauli::X: f[k] = {Axis::X, !minus}; break;
                    case Pauli::Y: f[k] = {Axis::Y, !minus}; break;
                    case Pauli::Z: f[k] = {Axis::Z, !minus}; break;
                }
                if (minus && s[k] != Pauli::I) coefficient = -coefficient;
            }
            map[f] += coefficient;
        }
    }
    return from_map(map);
}

ComplexMatrix EliminationResult::reconstruct(std::size_t n_qubits) const {
    const std::size_t dim = std::size_t{1} << n_qubits;
    return sum_terms(terms, n_qubits) - ComplexMatrix::identity(dim) * Complex{identity_deficit};
}

EliminationResult eliminate_negatives(const std::vector<ProductTerm>& terms, double identity_mass) {
    const std::size_t n = checked_qubits(terms);
    TermMap map = to_map(terms);

    // Snapshot of the negative terms; std::map order is lexicographic.
    std::vector<std::pair<ProductFactors, double>> negatives;
    for (const auto& [factors, c] : map) {
        if (c < -kTermDropTol) negatives.emplace_back(factors, -c);
    }

    // -alpha T = alpha (sum of all 2^n products on T's axes) - alpha 1, where
    // the sum includes T itself. The 2^n - 1 others stay positive and T cancels.
    double charges = 0.0;
    for (const auto& [factors, alpha] : negatives) {
        std::vector<Axis> axes(factors.size());
        std::transform(factors.begin(), factors.end(), axes.begin(),
                       [](const AxisProjector& p) { return p.axis; });
        add_to_axis_family(map, axes, alpha);
        charges += alpha;
    }

    EliminationResult out;
    const double net = charges - identity_mass;
    if (net >= 0.0) {
        out.identity_deficit = net;
    } else if (n > 0) {
        add_to_axis_family(map, std::vector<Axis>(n, Axis::Z), -net);
    }
    out.terms = from_map(map);
    return out;
}

double affine_parameter_from_deficit(double x, std::size_t dim) {
    if (x < 0.0) throw ContractError("identity deficit must be nonnegative");
    return static_cast<double>(dim) * x + 1.0;
}

DensityMatrix SeparableDecomposition::separable_state() const {
    std::vector<ProductTerm> raw;
    raw.reserve(terms.size());
    for (const auto& t : terms) raw.push_back({t.weight, t.factors});
    return DensityMatrix::unchecked(sum_terms(raw, n_qubits));
}

double SeparableDecomposition::weight_sum() const {
    return std::accumulate(terms.begin(), terms.end(), 0.0,
                           [](double acc, const WeightedProduct& t) { return acc + t.weight; });
}

double SeparableDecomposition::min_weight() const {
    double lo = terms.empty() ? 0.0 : terms.front().weight;
    for (const auto& t : terms) lo = std::min(lo, t.weight);
    return lo;
}

SeparableDecomposition separate(const DensityMatrix& rho) {
    const std::size_t n = rho.n_qubits();
    if (n == 0) throw DimensionError("separate: state needs at least one qubit");
    const PauliDecomposition d = pauli_decompose(rho.matrix());

    // Already a nonnegative mixture once identity factors are spread along z:
    // nothing to eliminate.
    EliminationResult elim;
    std::vector<ProductTerm> expanded = product_basis_expand(d);
    const bool nonnegative = std::all_of(expanded.begin(), expanded.end(),
                                         [](const ProductTerm& t) { return t.coefficient >= 0.0; });
    if (nonnegative) {
        elim.terms = std::move(expanded);
    } else {
        // Keep the identity coefficient in the identity account so it can be
        // netted against the elimination charges.
        const IdentitySplit split = split_identity(d);
        elim = eliminate_negatives(product_basis_expand(split.rest), split.identity_coefficient);
    }

    const std::size_t dim = rho.dim();
    const double a = affine_parameter_from_deficit(elim.identity_deficit, dim);
    SeparableDecomposition out;
    out.n_qubits = n;
    out.a = a;
    out.terms.reserve(elim.terms.size());
    for (auto& t : elim.terms) out.terms.push_back({t.coefficient / a, std::move(t.factors)});
    return out;
}

SeparableDecomposition qdice_decomposition() {
    SeparableDecomposition out;
    out.n_qubits = 2;
    out.a = 3.0;
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        out.terms.push_back({1.0 / 6.0, {{axis, true}, {axis, false}}});
        out.terms.push_back({1.0 / 6.0, {{axis, false}, {axis, true}}});
    }
    return out;
}

DensityMatrix qdice_sigma() { return qdice_decomposition().separable_state(); }

double partial_transpose_min_eigenvalue(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) {
        throw DimensionError("partial transpose test needs two qubits, got " +
                             std::to_string(rho.n_qubits()));
    }
    const auto& m = rho.matrix();
    ComplexMatrix pt(4);
    for (std::size_t ra = 0; ra < 2; ++ra) {
        for (std::size_t rb = 0; rb < 2; ++rb) {
            for (std::size_t ca = 0; ca < 2; ++ca) {
                for (std::size_t cb = 0; cb < 2; ++cb) {
                    pt(2 * ra + rb, 2 * ca + cb) = m(2 * ra + cb, 2 * ca + rb);
                }
            }
        }
    }
    return hermitian_eigensystem(pt).values.front();
}

double minimal_mixing_parameter(const DensityMatrix& rho, double tol) {
    if (rho.n_qubits() != 2) {
        throw DimensionError("minimal_mixing_parameter needs two qubits");
    }
    if (!(tol > 0.0)) throw ContractError("tolerance must be positive");
    const auto separable_at = [&](double a) {
        const ComplexMatrix mixed = affine_apply(AffineMap(1.0 / a, rho.dim()), rho);
        return partial_transpose_min_eigenvalue(DensityMatrix::unchecked(mixed)) >= -kPptTol;
    };
    if (separable_at(1.0)) return 1.0;
    double lo = 1.0;
    double hi = static_cast<double>(rho.dim() * rho.dim());
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (separable_at(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace qaffine
