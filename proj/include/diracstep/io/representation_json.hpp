// {"n": int, "dim": int, "alphas": [matrix, ...], "beta": matrix}, where a
// matrix is a row-major list of rows and each entry is [re, im].
#pragma once

#include "diracstep/algebra.hpp"

#include <json.hpp>

namespace diracstep::io {

nlohmann::json to_json(const algebra::DiracRepresentation& rep);

/// Throws std::invalid_argument when the document does not follow the
/// schema. Dimension consistency is left to algebra::verify_clifford.
algebra::DiracRepresentation representation_from_json(const nlohmann::json& doc);

}  // namespace diracstep::io
