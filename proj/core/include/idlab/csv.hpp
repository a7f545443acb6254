#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace idlab::csv {

/// Formats a double with 17 significant digits, enough to round-trip exactly.
std::string format_double(double v);

/// Splits one CSV line on commas. No quoting; none of our fields need it.
std::vector<std::string> split_line(const std::string& line);

/// Reads a whole text file; throws std::runtime_error on I/O failure.
std::string read_file(const std::filesystem::path& path);

/// Writes text to a file (LF line endings are the caller's concern).
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace idlab::csv
