#include "qaffine/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qaffine/error.hpp"

namespace qaffine::io {

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

template <typename Fn>
auto parse_field(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ContractError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
    return parse_field("matrix", [&] {
        if (!j.is_array() || j.empty()) throw ContractError("matrix must be a nonempty array of rows");
        const std::size_t dim = j.size();
        ComplexMatrix m(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            const json& row = j.at(r);
            if (!row.is_array() || row.size() != dim) throw ContractError("matrix must be square");
            for (std::size_t c = 0; c < dim; ++c) {
                const json& z = row.at(c);
                if (z.is_number()) {
                    m(r, c) = z.get<double>();
                } else if (z.is_array() && z.size() == 2) {
                    m(r, c) = Complex{z.at(0).get<double>(), z.at(1).get<double>()};
                } else {
                    throw ContractError("matrix entries must be [re, im] pairs");
                }
            }
        }
        return m;
    });
}

json to_json(const AffineMap& map) { return {{"a", map.a()}, {"dim", map.dim()}}; }

AffineMap affine_map_from_json(const json& j) {
    return parse_field("affine map", [&] {
        return AffineMap(j.at("a").get<double>(), j.at("dim").get<std::size_t>());
    });
}

json to_json(const SeparableDecomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms) {
        json factors = json::array();
        for (const auto& f : t.factors) factors.push_back(f.label());
        terms.push_back({{"weight", t.weight}, {"factors", std::move(factors)}});
    }
    return {{"a", d.a}, {"terms", std::move(terms)}};
}

SeparableDecomposition decomposition_from_json(const json& j) {
    return parse_field("separable decomposition", [&] {
        SeparableDecomposition d;
        d.a = j.at("a").get<double>();
        for (const json& t : j.at("terms")) {
            WeightedProduct w;
            w.weight = t.at("weight").get<double>();
            for (const json& f : t.at("factors")) w.factors.push_back(AxisProjector::parse(f.get<std::string>()));
            if (d.terms.empty()) {
                d.n_qubits = w.factors.size();
            } else if (w.factors.size() != d.n_qubits) {
                throw ContractError("terms have different qubit counts");
            }
            d.terms.push_back(std::move(w));
        }
        return d;
    });
}

json to_json(const ProbabilityTable& p) { return p.values(); }

json to_json(const CountTable& c) { return {{"total", c.total}, {"counts", c.counts}}; }

CountTable count_table_from_json(const json& j) {
    return parse_field("count table", [&] {
        CountTable c;
        c.total = j.at("total").get<double>();
        c.counts = j.at("counts").get<std::vector<double>>();
        return c;
    });
}

MeasurementSetting setting_from_json(const json& j) {
    return parse_field("measurement setting", [&] {
        if (j.contains("bloch")) {
            return MeasurementSetting(j.at("bloch").get<std::array<double, 3>>());
        }
        const std::string plane = j.value("plane", "xz");
        if (plane != "xz") throw ContractError("only the xz plane is supported for angle settings");
        return MeasurementSetting::in_xz_plane(j.at("angle").get<double>());
    });
}

json to_json(const MeasurementSetting& s) { return {{"bloch", s.bloch()}}; }

json to_json(const DistortionPipeline& p) {
    return {{"s", p.correction.s},  {"b", p.correction.b}, {"epsilon", p.epsilon},
            {"theta", p.theta},     {"mode", to_string(p.mode)}};
}

DistortionPipeline pipeline_from_json(const json& j) {
    return parse_field("pipeline config", [&] {
        DistortionPipeline p;
        p.correction.s = j.value("s", 1.0);
        p.correction.b = j.value("b", 0.0);
        p.epsilon = j.value("epsilon", 0.0);
        p.theta = j.value("theta", 0.0);
        p.mode = parse_pipeline_mode(j.value("mode", std::string("expected")));
        p.validate();
        return p;
    });
}

json to_json(const ChshSettings& s) {
    return {{"a", to_json(s.a)}, {"a_prime", to_json(s.a_prime)},
            {"b", to_json(s.b)}, {"b_prime", to_json(s.b_prime)}};
}

json to_json(const ChshResult& r) {
    json tables = json::array();
    for (const auto& t : r.tables) tables.push_back(to_json(t));
    return {{"E", r.correlations}, {"errors", r.errors}, {"S", r.s_value},
            {"tables", std::move(tables)}, {"clipped", r.clipped}};
}

std::string curve_csv(const AngularCurve& curve) {
    std::ostringstream out;
    out << "theta,E,source\n";
    for (std::size_t i = 0; i < curve.theta.size(); ++i) {
        out << format_double(curve.theta[i]) << ',' << format_double(curve.correlation[i]) << ','
            << curve.source << '\n';
    }
    return out.str();
}

json to_json(const AngularCurve& curve) {
    return {{"theta", curve.theta}, {"E", curve.correlation}, {"source", curve.source},
            {"clipped", curve.clipped}};
}

std::string count_table_csv_header(std::size_t n_outcomes) {
    std::ostringstream out;
    out << "settings,total";
    for (std::size_t k = 0; k < n_outcomes; ++k) out << ",n" << k;
    out << '\n';
    return out.str();
}

std::string count_table_csv_row(const std::string& label, const CountTable& c) {
    std::ostringstream out;
    out << label << ',' << format_double(c.total);
    for (double v : c.counts) out << ',' << format_double(v);
    out << '\n';
    return out.str();
}

}  // namespace qaffine::io
