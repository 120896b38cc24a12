// JSON and CSV forms of the library values.
#pragma once

#include <json.hpp>
#include <string>

#include "qaffine/affine.hpp"
#include "qaffine/bellharness.hpp"
#include "qaffine/distortion.hpp"
#include "qaffine/measurement.hpp"
#include "qaffine/qstate.hpp"
#include "qaffine/separability.hpp"
#include "qaffine/tables.hpp"

namespace qaffine::io {

using nlohmann::json;

/// Nested rows of [re, im] pairs.
json to_json(const ComplexMatrix& m);
/// Throws ContractError on malformed input.
ComplexMatrix matrix_from_json(const json& j);

json to_json(const AffineMap& map);
AffineMap affine_map_from_json(const json& j);

json to_json(const SeparableDecomposition& d);
SeparableDecomposition decomposition_from_json(const json& j);

json to_json(const ProbabilityTable& p);
json to_json(const CountTable& c);
CountTable count_table_from_json(const json& j);

/// {"bloch": [x, y, z]} or {"angle": theta, "plane": "xz"}.
MeasurementSetting setting_from_json(const json& j);
json to_json(const MeasurementSetting& s);

json to_json(const DistortionPipeline& p);
DistortionPipeline pipeline_from_json(const json& j);

json to_json(const ChshSettings& s);
json to_json(const ChshResult& r);

/// theta,E,source with one row per grid point and a header line.
std::string curve_csv(const AngularCurve& curve);
json to_json(const AngularCurve& curve);

/// total,counts... one row per settings pair.
std::string count_table_csv_header(std::size_t n_outcomes);
std::string count_table_csv_row(const std::string& label, const CountTable& c);

}  // namespace qaffine::io
