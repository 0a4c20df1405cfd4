#pragma once

// Plain-file plumbing: full-precision CSV assembly, simple x/y CSV parsing,
// and whole-file read/write. All numeric output uses round-trippable decimal
// floats so repeated runs under a fixed seed are byte-identical.

#include <string>
#include <vector>

namespace rdr {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

/// Header row plus one row per entry; all rows must match the header width.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

/// Parses a CSV with a header row and at least two numeric columns; returns
/// the first two columns. Throws std::runtime_error on malformed input.
std::pair<std::vector<double>, std::vector<double>> parse_xy_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace rdr
