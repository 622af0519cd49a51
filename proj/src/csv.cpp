#include "qtalbot/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "qtalbot/error.hpp"

namespace qtalbot {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_csv(const std::vector<CsvColumn>& columns,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& c : columns) out += "# column: " + c.name + " [" + c.unit + "]\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw UsageError("csv row width does not match the header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_number(row[k]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows) {
  const std::string text = format_csv(columns, rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace qtalbot
