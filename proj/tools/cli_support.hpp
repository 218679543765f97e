#pragma once

// Small parsing helpers shared by the command-line tool and its tests.

#include <filesystem>
#include <string>
#include <vector>

namespace cqleak::cli {

/// Parses an angle given in radians or as a multiple of pi:
/// "1.25", "pi", "-pi/2", "2.5pi", "3pi/2", "0.5*pi".
/// Throws std::invalid_argument on malformed input.
double parse_angle(const std::string& text);

/// Comma-separated list of numbers. Throws std::invalid_argument on malformed
/// or empty input.
std::vector<double> parse_list(const std::string& text);

/// Explicit path wins; otherwise default_name inside $CQLEAK_OUT_DIR; an empty
/// result means standard output.
std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& default_name);

}  // namespace cqleak::cli
