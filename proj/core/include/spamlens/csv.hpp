#pragma once

#include <string>
#include <vector>

namespace spamlens {

/// Formats a double with enough digits to round-trip exactly
/// (chars_format::general, precision 17).
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

/// Splits one CSV record, honoring double-quote escaping.
std::vector<std::string> parse_csv_line(const std::string& line);

/// Reads a whole file; throws DataError when the file cannot be opened.
std::string read_file(const std::string& path);

/// Writes a whole file; throws DataError when the file cannot be opened.
void write_file(const std::string& path, const std::string& content);

}  // namespace spamlens
