// Python bindings. Matrices cross the boundary as complex128 numpy arrays,
// probability tables as lists of floats.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qaffine/affine.hpp"
#include "qaffine/bellharness.hpp"
#include "qaffine/distortion.hpp"
#include "qaffine/error.hpp"
#include "qaffine/measurement.hpp"
#include "qaffine/qstate.hpp"
#include "qaffine/separability.hpp"

namespace py = pybind11;
using namespace qaffine;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DimensionError("expected a square matrix");
    const auto n = static_cast<std::size_t>(a.shape(0));
    const auto view = a.unchecked<2>();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = view(r, c);
    return m;
}

ComplexArray to_array(const ComplexMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.dim());
    ComplexArray out({n, n});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < n; ++r)
        for (py::ssize_t c = 0; c < n; ++c) view(r, c) = m(r, c);
    return out;
}

DensityMatrix to_state(const ComplexArray& a) { return DensityMatrix::from_matrix(to_matrix(a)); }

std::vector<MeasurementSetting> to_settings(const std::vector<std::array<double, 3>>& directions) {
    return {directions.begin(), directions.end()};
}

ClassicalSource qdice_source(double a, double trials) {
    DistortionPipeline pipeline;
    if (a != 1.0) pipeline = DistortionPipeline::threshold_for(a, trials, 4);
    return {model_from_decomposition(qdice_decomposition()), pipeline, trials};
}

py::dict decomposition_dict(const SeparableDecomposition& d) {
    py::list terms;
    for (const auto& t : d.terms) {
        std::vector<std::string> labels;
        for (const auto& f : t.factors) labels.push_back(f.label());
        terms.append(py::make_tuple(t.weight, labels));
    }
    py::dict out;
    out["a"] = d.a;
    out["n_qubits"] = d.n_qubits;
    out["terms"] = terms;
    out["sigma"] = to_array(d.separable_state().matrix());
    return out;
}

}  // namespace

PYBIND11_MODULE(_qaffine, m) {
    m.doc() = "Affine maps, separable decompositions and Bell-test mimicry";

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<InvalidStateError>(m, "InvalidStateError", base.ptr());
    py::register_exception<DegenerateDataError>(m, "DegenerateDataError", base.ptr());
    py::register_exception<DeviceSaturatedError>(m, "DeviceSaturatedError", base.ptr());

    m.def("bell_singlet", [] { return to_array(bell_singlet().matrix()); });
    m.def("qdice_sigma", [] { return to_array(qdice_sigma().matrix()); });
    m.def("maximally_mixed", [](std::size_t n) { return to_array(maximally_mixed(n).matrix()); }, py::arg("n_qubits"));

    m.def(
        "pauli_decompose",
        [](const ComplexArray& a) {
            std::map<std::string, double> out;
            for (const auto& [s, c] : pauli_decompose(to_matrix(a)).coefficients) out[s.str()] = c;
            return out;
        },
        py::arg("matrix"));

    m.def(
        "affine_apply", [](double a, const ComplexArray& rho) {
            const ComplexMatrix mat = to_matrix(rho);
            return to_array(affine_apply(AffineMap(a, mat.dim()), mat));
        },
        py::arg("a"), py::arg("rho"));
    m.def(
        "transform_probabilities",
        [](double a, const std::vector<double>& p) {
            return transform_probabilities(AffineMap(a, p.size()), ProbabilityTable(p)).values();
        },
        py::arg("a"), py::arg("p"));
    m.def(
        "pseudo_pure_split",
        [](const ComplexArray& rho) -> py::object {
            const auto split = pseudo_pure_split(to_state(rho));
            if (!split) return py::none();
            return py::make_tuple(split->a, to_array(split->pure_state.matrix()));
        },
        py::arg("rho"));

    m.def("separate", [](const ComplexArray& rho) { return decomposition_dict(separate(to_state(rho))); }, py::arg("rho"));
    m.def("qdice_decomposition", [] { return decomposition_dict(qdice_decomposition()); });
    m.def(
        "minimal_mixing_parameter",
        [](const ComplexArray& rho, double tol) { return minimal_mixing_parameter(to_state(rho), tol); },
        py::arg("rho"), py::arg("tol") = 1e-6);

    m.def(
        "projective_probabilities",
        [](const ComplexArray& rho, const std::vector<std::array<double, 3>>& directions) {
            return projective_probabilities(to_matrix(rho), to_settings(directions)).values();
        },
        py::arg("rho"), py::arg("directions"));
    m.def(
        "correlation", [](const std::vector<double>& p) { return correlation(ProbabilityTable(p)); }, py::arg("p"));

    m.def(
        "misclassify",
        [](double eps, const std::vector<double>& p) {
            return misclassify_parties(MisclassificationModel{eps}, ProbabilityTable(p)).values();
        },
        py::arg("epsilon"), py::arg("p"));
    m.def(
        "equivalent_affine", [](double theta, double trials, std::size_t n) { return equivalent_affine(theta, trials, n).a(); },
        py::arg("theta"), py::arg("trials"), py::arg("n_outcomes"));

    m.def(
        "chsh_singlet", [] { return chsh_exact(bell_singlet(), ChshSettings::canonical()).s_value; });
    m.def(
        "chsh_qdice",
        [](double a, double trials) { return chsh_exact(qdice_source(a, trials), ChshSettings::canonical()).s_value; },
        py::arg("a") = 1.0, py::arg("trials") = 1.2e6);
    m.def(
        "chsh_qdice_sampled",
        [](double a, std::uint64_t trials, std::uint64_t seed) {
            const ClassicalSource src = qdice_source(a, static_cast<double>(trials));
            py::gil_scoped_release release;
            return chsh_sampled(src.model, src.pipeline, ChshSettings::canonical(), trials, seed).s_value;
        },
        py::arg("a") = 1.0, py::arg("trials") = 1'200'000, py::arg("seed") = 1);
    m.def(
        "angular_curve",
        [](const std::string& source, std::size_t points, double a) {
            AngularCurve curve;
            if (source == "singlet") {
                curve = angular_sweep(bell_singlet(), points);
            } else if (source == "qdice") {
                curve = angular_sweep(qdice_source(a, 1.2e6), points);
            } else {
                throw ContractError("source must be 'singlet' or 'qdice'");
            }
            return py::make_tuple(curve.theta, curve.correlation);
        },
        py::arg("source"), py::arg("points") = 64, py::arg("a") = 1.0);
}
