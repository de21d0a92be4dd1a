#include "sniht/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sniht {

namespace {

std::vector<double> parse_numeric_row(const std::string& line, const std::string& where) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string cell = line.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw std::runtime_error(where + ": cannot parse '" + cell + "' as a number");
    }
    while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r')) {
      ++used;
    }
    if (used != cell.size()) {
      throw std::runtime_error(where + ": trailing characters in cell '" + cell + "'");
    }
    values.push_back(v);
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return values;
}

}  // namespace

ComplexMatrix read_complex_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(parse_numeric_row(line, path.string() + ":" + std::to_string(lineno)));
    if (rows.back().size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": ragged row (expected " + std::to_string(rows.front().size()) +
                               " columns)");
    }
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty matrix file");
  const std::size_t ncols = rows.front().size();
  if (ncols % 2 != 0) {
    throw std::runtime_error(path.string() + ": odd column count; expected alternating re,im pairs");
  }
  ComplexMatrix a(static_cast<Index>(rows.size()), static_cast<Index>(ncols / 2));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ncols / 2; ++j) {
      a(static_cast<Index>(i), static_cast<Index>(j)) =
          Complex(rows[i][2 * j], rows[i][2 * j + 1]);
    }
  }
  require_finite(a, path.string());
  return a;
}

void write_complex_csv(const std::filesystem::path& path, const ComplexMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const Complex v = a(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v.real(), v.imag());
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_support_line(const std::filesystem::path& path, const SupportSet& support) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0) out << ' ';
    out << (support[i] + 1);  // 1-based externally
  }
  out << '\n';
}

SupportSet read_support_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::istringstream iss(line);
  SupportSet support;
  long long v = 0;
  while (iss >> v) {
    if (v < 1) throw std::runtime_error(path.string() + ": support indices are 1-based");
    support.push_back(static_cast<Index>(v - 1));
  }
  return support;
}

}  // namespace sniht
