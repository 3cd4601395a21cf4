#pragma once

#include <json.hpp>

#include "ptl/grsk.hpp"

namespace ptl {

// {"rows": [[w11, w12, ...], [w21, ...], ...]}; ragged rows give the shape.
nlohmann::json array_to_json(const PolygonalArray<double>& w);
// exact entries are written as "p/q" strings
nlohmann::json array_to_json(const PolygonalArray<Rational>& w);

PolygonalArray<double> array_from_json(const nlohmann::json& j);
// accepts integers, "p/q" strings and decimal literals, all read exactly
PolygonalArray<Rational> rational_array_from_json(const nlohmann::json& j);

}  // namespace ptl
