#pragma once

#include <string>
#include <vector>

namespace qtalbot {

struct CsvColumn {
  std::string name;
  std::string unit;
};

// One "# column: name [unit]" line per column, then comma-separated rows.
std::string format_csv(const std::vector<CsvColumn>& columns,
                       const std::vector<std::vector<double>>& rows);
void write_csv(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows);
// Shortest round-tripping decimal form.
std::string format_number(double v);

}  // namespace qtalbot
