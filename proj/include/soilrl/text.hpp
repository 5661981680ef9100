#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace soilrl {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict double parse of the whole token; returns false on failure.
bool parse_double(std::string_view token, double& out);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Writes `contents` to `path`, creating parent directories.
void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

}  // namespace soilrl
