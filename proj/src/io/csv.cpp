#include "grhmc/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace grhmc::io {

Index CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<Index>(i);
  throw ContractError("csv: no column named '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ContractError("csv: '" + path + "' is empty (header row required)");
  CsvTable table;
  for (const auto& cell : split_line(line)) table.header.push_back(trim(cell));
  const size_t ncol = table.header.size();
  if (ncol == 0) throw ContractError("csv: empty header row in '" + path + "'");

  std::vector<double> data;
  long n_rows = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != ncol)
      throw ContractError("csv: line " + std::to_string(line_no) + " of '" + path + "' has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(ncol));
    for (const auto& cell : cells) {
      const std::string s = trim(cell);
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty())
        throw ContractError("csv: non-numeric cell '" + s + "' at line " +
                            std::to_string(line_no) + " of '" + path + "'");
      data.push_back(v);
    }
    ++n_rows;
  }
  table.values.resize(n_rows, static_cast<Index>(ncol));
  for (long r = 0; r < n_rows; ++r)
    for (size_t c = 0; c < ncol; ++c)
      table.values(r, static_cast<Index>(c)) = data[static_cast<size_t>(r) * ncol + c];
  return table;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Mat& values) {
  if (static_cast<Index>(header.size()) != values.cols())
    throw ContractError("write_csv: header width and matrix width disagree");
  std::ofstream out(path);
  if (!out) throw ContractError("write_csv: cannot open '" + path + "' for writing");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  if (!out) throw IntegrationError("write_csv: write to '" + path + "' failed");
}

}  // namespace grhmc::io
