#include "drspher/params.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "drspher/error.hpp"

namespace drspher {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

std::string SpaceParams::describe() const {
  std::ostringstream os;
  os << "m=" << m << " k=" << k << " Q=" << Q.num << '/' << Q.den << " rho=" << rho.num << '/'
     << rho.den << " n=" << n;
  return os.str();
}

SpaceParams derive_params(int m, int k) {
  if (m < 2 || m % 2 != 0) {
    throw DomainError("m = dim p must be an even integer >= 2 (got " + std::to_string(m) + ")");
  }
  if (k < 1) throw DomainError("k = dim z must be >= 1 (got " + std::to_string(k) + ")");
  SpaceParams p;
  p.m = m;
  p.k = k;
  p.Q = Rational::make(m + 2 * k, 2);
  p.rho = Rational::make(m + 2 * k, 4);
  p.n = m + k + 1;
  p.density_scale = std::ldexp(1.0, m + k);
  return p;
}

double density(const SpaceParams& p, double r) {
  if (!(r >= 0.0)) throw DomainError("density: radius must be non-negative");
  if (r == 0.0) return 0.0;
  const double h = 0.5 * r;
  const double log_a = std::log(p.density_scale) + (p.m + p.k) * std::log(std::sinh(h)) +
                       p.k * std::log(std::cosh(h));
  return std::exp(log_a);
}

double log_density_derivative(const SpaceParams& p, double r) {
  if (!(r > 0.0)) throw DomainError("log_density_derivative: radius must be positive");
  const double h = 0.5 * r;
  return 0.5 * (p.m + p.k) / std::tanh(h) + 0.5 * p.k * std::tanh(h);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SpaceParams parse_params_config(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int m = -1;
  int k = -1;
  double scale = 0.0;
  bool have_scale = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      std::size_t used = 0;
      if (key == "m") {
        m = std::stoi(value, &used);
      } else if (key == "k") {
        k = std::stoi(value, &used);
      } else if (key == "density_scale") {
        scale = std::stod(value, &used);
        have_scale = true;
      } else {
        continue;  // keys owned by other config layers
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw FormatError("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  if (m < 0 || k < 0) throw FormatError("config must set both m and k");
  SpaceParams p = derive_params(m, k);
  if (have_scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("density_scale must be > 0");
    p.density_scale = scale;
  }
  return p;
}

std::string format_params_config(const SpaceParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "m=" << p.m << "\nk=" << p.k << "\ndensity_scale=" << p.density_scale << '\n';
  return os.str();
}

}  // namespace drspher
