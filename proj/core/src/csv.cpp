#include "drspher/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "drspher/error.hpp"

namespace drspher {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  if (s.empty()) throw FormatError("csv line " + std::to_string(line) + ": empty field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("csv line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw FormatError("csv line " + std::to_string(line) + ": not a number: '" + s + "'");
  if (!std::isfinite(v)) throw FormatError("csv line " + std::to_string(line) + ": non-finite value");
  return v;
}

std::string join(std::span<const std::string> names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s;
}

}  // namespace

std::vector<double> CsvTable::column(std::size_t c) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(c));
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable read_csv(std::istream& is, std::span<const std::string> expected) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      if (lineno == 1 && !cells.empty() && cells[0].size() >= 3 && cells[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
        cells[0] = cells[0].substr(3);
      if (cells.size() != expected.size() || !std::equal(cells.begin(), cells.end(), expected.begin()))
        throw FormatError("csv: expected header '" + join(expected) + "', got '" + trim(line) + "'");
      t.header.assign(expected.begin(), expected.end());
      have_header = true;
      continue;
    }
    if (cells.size() != expected.size())
      throw FormatError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(expected.size()) +
                        " fields, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, lineno));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("csv: missing header row");
  if (t.rows.empty()) throw FormatError("csv: no data rows");
  return t;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  os << join(table.header) << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

RadialProfile read_profile(std::istream& is) {
  const std::string names[] = {"r", "value"};
  const auto t = read_csv(is, names);
  auto rs = t.column(0);
  if (rs.front() < 0.0) throw FormatError("profile csv: negative radius");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) throw FormatError("profile csv: radii must be strictly increasing");
  if (rs.size() < 4) throw FormatError("profile csv: need at least 4 samples");
  return RadialProfile::from_samples(std::move(rs), t.column(1), DecayClass::compact);
}

void write_profile(std::ostream& os, std::span<const double> rs, std::span<const double> values,
                   const std::string& value_name) {
  CsvTable t;
  t.header = {"r", value_name};
  for (std::size_t i = 0; i < rs.size(); ++i) t.rows.push_back({rs[i], values[i]});
  write_csv(os, t);
}

SpectralFunction read_spectrum(std::istream& is, bool even) {
  const std::string names[] = {"lambda", "value"};
  const auto t = read_csv(is, names);
  auto ls = t.column(0);
  auto vs = t.column(1);
  if (ls.size() < 2) throw FormatError("spectrum csv: need at least 2 samples");
  const double step = (ls.back() - ls.front()) / static_cast<double>(ls.size() - 1);
  if (!(step > 0.0)) throw FormatError("spectrum csv: lambdas must be increasing");
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (std::abs(ls[i] - (ls.front() + static_cast<double>(i) * step)) > 1e-9 * std::max(1.0, std::abs(ls[i])))
      throw FormatError("spectrum csv: lambdas must be uniformly spaced");
  if (even && ls.front() == 0.0) {
    std::vector<double> mirrored(vs.rbegin(), vs.rend() - 1);
    mirrored.insert(mirrored.end(), vs.begin(), vs.end());
    vs = std::move(mirrored);
    SpectralFunction f;
    f.grid = UniformGrid::symmetric(ls.back(), static_cast<int>(vs.size()));
    f.values = std::move(vs);
    f.even = true;
    return f;
  }
  SpectralFunction f;
  f.grid = UniformGrid{ls.front(), ls.back(), static_cast<int>(ls.size())};
  f.values = std::move(vs);
  f.even = even;
  return f;
}

void write_spectrum(std::ostream& os, const SpectralFunction& f, const std::string& value_name) {
  CsvTable t;
  t.header = {"lambda", value_name};
  const auto ls = f.lambdas();
  for (std::size_t i = 0; i < ls.size(); ++i) t.rows.push_back({ls[i], f.values[i]});
  write_csv(os, t);
}

RadialMeasure read_measure(std::istream& is) {
  const std::string names[] = {"r", "weight"};
  const auto t = read_csv(is, names);
  RadialMeasure mu{t.column(0), t.column(1)};
  for (std::size_t i = 0; i < mu.rs.size(); ++i)
    if (mu.rs[i] < 0.0 || mu.weights[i] < 0.0) throw FormatError("measure csv: radii and weights must be >= 0");
  return mu;
}

void write_measure(std::ostream& os, const RadialMeasure& mu) {
  CsvTable t;
  t.header = {"r", "weight"};
  for (std::size_t i = 0; i < mu.rs.size(); ++i) t.rows.push_back({mu.rs[i], mu.weights[i]});
  write_csv(os, t);
}

}  // namespace drspher
