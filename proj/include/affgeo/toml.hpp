#pragma once

// Reader for the TOML subset used by scenario files: tables, dotted tables,
// arrays of tables, bare/quoted/dotted keys, basic and literal strings,
// integers, floats (incl. inf/nan), booleans, arrays and inline tables.
// Dates and multi-line strings are rejected. Syntax errors throw ParseError
// with the byte offset (the message also names the line).

#include <string_view>

#include "json.hpp"

namespace affgeo {

nlohmann::ordered_json parse_toml(std::string_view text);

}  // namespace affgeo
