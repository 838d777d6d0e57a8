#pragma once

#include <string>
#include <vector>

namespace netbart {

using CsvRow = std::vector<std::string>;

// RFC-4180 parser: quoted fields may contain commas, escaped quotes ("")
// and line breaks. Accepts both \n and \r\n line endings.
std::vector<CsvRow> parse_csv(const std::string& text);
std::vector<CsvRow> read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
void write_csv_file(const std::string& path, const std::vector<CsvRow>& rows);

// Fixed shortest-round-trip formatting for doubles written to output
// files; identical input always yields identical bytes.
std::string format_double(double v);

}  // namespace netbart
