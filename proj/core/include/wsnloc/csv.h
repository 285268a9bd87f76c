#pragma once

#include <string>
#include <vector>

#include "wsnloc/types.h"

namespace wsnloc {

// Nine significant digits, shortest form (printf "%.9g").
std::string format_number(double value);

// Minimal comma-separated table: a header row plus string cells. No quoting;
// none of the files this library writes need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const CsvTable& table, const std::string& path);

// positions_final.csv: node,x_m,y_m[,z_m]
void write_positions_csv(const Matrix& positions, const std::string& path);
Matrix read_positions_csv(const std::string& path);

}  // namespace wsnloc
