#pragma once

// Internal JSON helpers: matrix encoding and the deterministic report writer.

#include <optional>
#include <string>

#include <json.hpp>

#include "ruo/matrix.hpp"

namespace ruo::detail {

using Json = nlohmann::ordered_json;

/// 15 significant digits, scientific notation; -0 prints as 0.
std::string format_number(double x);

/// Pretty-printed JSON with every float through format_number. Arrays whose
/// elements are all scalars stay on one line.
std::string dump(const Json& j);

Json complex_json(Complex z);
Json matrix_json(const ComplexMatrix& m);

/// Decodes a list of rows of [re, im] pairs. `path` prefixes error messages.
/// When dim is set, the matrix must be dim x dim.
ComplexMatrix matrix_from_json(const Json& j, const std::string& path, std::optional<std::size_t> dim = {});
Complex complex_from_json(const Json& j, const std::string& path);

}  // namespace ruo::detail
