#pragma once

#include <string>
#include <string_view>

namespace tskan {

/// Locale-independent shortest form with `significant` digits ("%.<n>g"
/// semantics, period separator).
std::string format_number(double value, int significant = 9);

/// Parses a full-field decimal number; returns false on trailing garbage,
/// empty input or non-finite results.
bool parse_number(std::string_view text, double& out);

/// Truncates and writes `path`; raises IoError naming the path on failure.
void write_text_file(const std::string& path, std::string_view content);

std::string read_text_file(const std::string& path);

}  // namespace tskan
