#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "drspher/transform.hpp"

namespace drspher {

/// Numeric CSV with a mandatory header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t c) const;
};

/// Parses `is`; the header must equal `expected` (whitespace around names is
/// ignored). Throws FormatError on a missing or wrong header, ragged rows,
/// empty input or non-finite / unparsable numbers.
CsvTable read_csv(std::istream& is, std::span<const std::string> expected);
void write_csv(std::ostream& os, const CsvTable& table);

/// 17 significant digits, shortest exponent form from printf("%.17g").
std::string format_double(double x);

/// `r,value`, r >= 0 strictly increasing.
RadialProfile read_profile(std::istream& is);
void write_profile(std::ostream& os, std::span<const double> rs, std::span<const double> values,
                   const std::string& value_name = "value");

/// `lambda,value` on a uniform grid. A grid starting at 0 is mirrored to a
/// symmetric one when `even` is set.
SpectralFunction read_spectrum(std::istream& is, bool even = true);
void write_spectrum(std::ostream& os, const SpectralFunction& f, const std::string& value_name = "value");

/// `r,weight`.
RadialMeasure read_measure(std::istream& is);
void write_measure(std::ostream& os, const RadialMeasure& mu);

}  // namespace drspher
