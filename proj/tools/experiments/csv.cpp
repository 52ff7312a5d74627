#include "experiments/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "experiments/config.hpp"

namespace pswarm::experiments {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::logic_error("format_real: buffer too small");
  return std::string(buffer, ptr);
}

double parse_real_cell(const std::string& cell) {
  if (cell.empty() || cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end) throw DataError("not a number: '" + cell + "'");
  return value;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw DataError("missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_real_cell(rows.at(row).at(column(name)));
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const std::size_t k = column(name);
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& row : rows) values.push_back(parse_real_cell(row.at(k)));
  return values;
}

std::string CsvTable::to_string() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream stream(text);
  std::string line;
  bool first = true;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw DataError("line " + std::to_string(line_number) + ": expected " + std::to_string(table.header.size()) +
                        " cells, got " + std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw DataError("empty CSV");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << table.to_string();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_observations(const std::filesystem::path& path) {
  CsvTable table;
  try {
    table = read_csv(path);
  } catch (const IoError& e) {
    throw DataError(e.what());
  }
  const auto t = table.numbers("t");
  auto y = table.numbers("y");
  if (y.empty()) throw DataError(path.string() + ": no observations");
  for (std::size_t row = 0; row < t.size(); ++row) {
    if (t[row] != static_cast<double>(row + 1)) {
      throw DataError(path.string() + ": t must run 1, 2, ... (row " + std::to_string(row + 1) + ")");
    }
    if (!std::isfinite(y[row])) throw DataError(path.string() + ": non-finite y at t=" + std::to_string(row + 1));
  }
  return y;
}

}  // namespace pswarm::experiments
