#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cwemap::csv {

/// Formats a real value with 12 significant digits. Every floating point
/// number written to a report goes through this function so that reruns
/// are byte-identical.
std::string format_real(double value);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

/// Parses CSV text into rows of fields. Handles quoted fields with
/// doubled quotes; final newline optional.
std::vector<std::vector<std::string>> parse(const std::string& text);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory followed by a rename,
/// so readers never observe a partially written artifact.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cwemap::csv
