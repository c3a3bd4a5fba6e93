#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace capx {

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& text);

// Numeric CSV: '#'-prefixed metadata lines, one header row, then records.
struct CsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  bool operator==(const CsvTable&) const = default;
};

std::string to_csv_string(const CsvTable& table);
CsvTable parse_csv_string(const std::string& text);
void write_csv_table(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv_table(const std::filesystem::path& path);

}  // namespace capx
