// SPDX-License-Identifier: Apache-2.0
#include "filtra/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace filtra::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, int line_no) {
  std::vector<double> values;
  if (const std::string t = trim(line); !t.empty() && t.back() == ',') {
    throw std::runtime_error("line " + std::to_string(line_no) + ": trailing comma");
  }
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + t + "'");
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected) + " values, got " +
                             std::to_string(values.size()));
  }
  return values;
}

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) return line;
  }
  throw std::runtime_error("unexpected end of file after line " + std::to_string(line_no));
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FilterGrid read_filter_csv(std::istream& in) {
  int line_no = 0;
  const std::string header = trim(next_line(in, line_no));
  int size = 0;
  if (header.rfind("S=", 0) != 0) throw std::runtime_error("line 1: expected 'S=<odd int>'");
  try {
    std::size_t used = 0;
    size = std::stoi(header.substr(2), &used);
    if (used != header.size() - 2) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw std::runtime_error("line 1: bad filter size '" + header + "'");
  }
  if (size < 1 || size % 2 == 0) {
    throw std::runtime_error("line 1: filter size must be odd and >= 1, got " + std::to_string(size));
  }
  std::vector<double> values;
  for (int row = 0; row < size; ++row) {
    const std::string line = next_line(in, line_no);
    const auto parsed = parse_row(line, static_cast<std::size_t>(size), line_no);
    values.insert(values.end(), parsed.begin(), parsed.end());
  }
  try {
    return FilterGrid(size, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
}

FilterGrid read_filter_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open filter file " + path.string());
  try {
    return read_filter_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_filter_csv(std::ostream& out, const FilterGrid& f) {
  out << "S=" << f.size() << '\n';
  for (int row = 0; row < f.size(); ++row) {
    for (int col = 0; col < f.size(); ++col) {
      if (col) out << ',';
      out << format_double(f(row, col));
    }
    out << '\n';
  }
}

void write_pgm(std::ostream& out, const FilterGrid& f) {
  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  const double min = *lo, range = *hi - *lo;
  out << "P2\n" << f.size() << ' ' << f.size() << "\n255\n";
  for (int row = 0; row < f.size(); ++row) {
    for (int col = 0; col < f.size(); ++col) {
      const long level = range > 0.0 ? std::lround(255.0 * (f(row, col) - min) / range) : 128;
      if (col) out << ' ';
      out << level;
    }
    out << '\n';
  }
}

FeatureMap read_feature_csv(std::istream& in) {
  int line_no = 0;
  const std::string header = trim(next_line(in, line_no));
  std::stringstream ss(header);
  std::string field;
  int c = -1, h = -1, w = -1, mult = -1;
  std::string group_text, rep_text;
  while (std::getline(ss, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("line 1: bad header field '" + field + "'");
    const std::string key = trim(field.substr(0, eq)), value = trim(field.substr(eq + 1));
    try {
      if (key == "C") c = std::stoi(value);
      else if (key == "H") h = std::stoi(value);
      else if (key == "W") w = std::stoi(value);
      else if (key == "mult") mult = std::stoi(value);
      else if (key == "group") group_text = value;
      else if (key == "rep") rep_text = value;
      else throw std::runtime_error("unknown key");
    } catch (const std::exception&) {
      throw std::runtime_error("line 1: bad header field '" + field + "'");
    }
  }
  if (c < 1 || h < 1 || w < 1 || mult < 1 || group_text.empty() || rep_text.empty()) {
    throw std::runtime_error("line 1: header needs C, H, W, group, rep and mult");
  }
  try {
    const GroupSpec group = GroupSpec::parse(group_text);
    const RepSpec rep = RepSpec::parse(group, rep_text);
    if (c != mult * rep.dim()) {
      throw std::runtime_error("line 1: C=" + std::to_string(c) + " but mult*dim(rep)=" +
                               std::to_string(mult * rep.dim()));
    }
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(c) * static_cast<std::size_t>(h) *
                 static_cast<std::size_t>(w));
    for (int r = 0; r < c * h; ++r) {
      const std::string line = next_line(in, line_no);
      const auto row = parse_row(line, static_cast<std::size_t>(w), line_no);
      data.insert(data.end(), row.begin(), row.end());
    }
    return FeatureMap(rep, mult, h, w, std::move(data));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
}

void write_feature_csv(std::ostream& out, const FeatureMap& f) {
  out << "C=" << f.channels() << ",H=" << f.height() << ",W=" << f.width()
      << ",group=" << f.group().name() << ",rep=" << f.rep().name()
      << ",mult=" << f.multiplicity() << '\n';
  for (int c = 0; c < f.channels(); ++c) {
    for (int row = 0; row < f.height(); ++row) {
      for (int col = 0; col < f.width(); ++col) {
        if (col) out << ',';
        out << format_double(f(c, row, col));
      }
      out << '\n';
    }
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

}  // namespace filtra::io
