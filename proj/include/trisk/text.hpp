#pragma once

#include <optional>
#include <string>

namespace trisk::text {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Fixed two-decimal formatting for human-readable tables.
std::string format_fixed2(double v);

std::string format_opt(const std::optional<double>& v);

/// Strict double parse of a full cell; throws SchemaError otherwise.
double parse_double(const std::string& cell, const std::string& context);

} // namespace trisk::text
