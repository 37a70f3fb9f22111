#pragma once

#include <string>
#include <vector>

#include "grhmc/common.hpp"

namespace grhmc::io {

struct CsvTable {
  std::vector<std::string> header;
  Mat values;

  Index column(const std::string& name) const;
};

/// Comma-separated numeric table with a mandatory header row; rows with
/// non-numeric cells are rejected with their line number.
CsvTable read_csv(const std::string& path);

/// Matrix with header, floats at 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Mat& values);

std::string format_double(double v);

}  // namespace grhmc::io
