// reporting.hpp — machine-readable report documents with deterministic
// serialization: fixed key order, floats printed as %.17g.
#pragma once

#include "sympkit/types.hpp"

#include <json.hpp>

#include <string>

namespace sympkit {

using Json = nlohmann::ordered_json;

/// Complex scalar as a [re, im] pair.
Json json_complex(Complex value);

/// Matrix as row-major nested arrays of [re, im] pairs.
Json json_matrix(const Matrix& value);

/// Real vector as a plain array.
Json json_real_vector(const RealVector& value);

/// One pass/fail check line: {"name": ..., "status": "pass"|"fail", "residual": ...}.
Json json_check(const std::string& name, bool pass, double residual);

/// Serialize with insertion order preserved and every float rendered with
/// 17 significant digits; byte-identical for identical documents.
std::string to_json_string(const Json& doc);

/// Flatten to CSV lines "path,value"; arrays index as path[i], matrices as
/// produced by json_matrix flatten to path[row][col][0|1].
std::string to_csv_string(const Json& doc);

} // namespace sympkit
