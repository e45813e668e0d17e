#pragma once

#include <string>

#include <json.hpp>

namespace metastab::harness {

// Reads the flat TOML subset used by experiment configs: key = value pairs, [table] headers,
// basic strings, integers, floats, booleans, arrays of scalars and # comments.
nlohmann::json parse_toml(const std::string& text);

}  // namespace metastab::harness
