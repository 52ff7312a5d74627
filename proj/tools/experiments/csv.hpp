#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace pswarm::experiments {

/// Shortest decimal that parses back to the same double. Non-finite values are
/// written as "nan", "inf" and "-inf".
std::string format_real(double value);
double parse_real_cell(const std::string& cell);

/// A header plus rows of string cells. Empty cells read back as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  /// Comma-separated, LF line endings.
  std::string to_string() const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Observation series with header "t,y"; t must start at 1 and increase by 1.
/// Throws DataError on malformed input.
std::vector<double> read_observations(const std::filesystem::path& path);

}  // namespace pswarm::experiments
