/*
 * SPDX-License-Identifier: Apache-2.0
 */

// CSV output with a provenance comment line, and atomic file writes.

#pragma once

#include <string>
#include <vector>

namespace ratspec {

/// Library version, recorded in every CSV provenance line.
inline constexpr const char* kVersion = "0.1.0";

/// "specfun/1 mmgf/1 ..." in a fixed order.
std::string module_versions();

/// Hex SHA-256 of text.
std::string sha256_hex(const std::string& text);

/// "# ratspec 0.1.0 config_sha256=<hash> modules=<module_versions()>".
std::string provenance_line(const std::string& config_text);

/// Shortest round-trip decimal form of v ("%.17g" style, deterministic).
std::string format_double(double v);

/// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int decimals);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  /// Provenance line, header row, then the rows; '\n' line ends.
  std::string render(const std::string& provenance) const;
};

/// Writes to a temporary file in the same directory and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace ratspec
