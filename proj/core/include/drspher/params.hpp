#pragma once

#include <cstdint>
#include <string>

namespace drspher {

/// Exact rational with positive denominator, reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Dimension data of a Damek-Ricci space S = NA with dim p = m, dim z = k.
///
/// Everything else (homogeneous dimension Q = m/2 + k, rho = Q/2,
/// n = dim s = m + k + 1) is derived exactly. `density_scale` normalizes the
/// radial volume density and is fixed by calibrate() in plancherel.hpp.
struct SpaceParams {
  int m = 2;
  int k = 1;
  Rational Q;
  Rational rho;
  int n = 0;
  double density_scale = 0.0;

  double q() const { return Q.to_double(); }
  double rho_value() const { return rho.to_double(); }

  std::string describe() const;
};

/// Builds the parameter set for (m, k); throws DomainError unless m is even,
/// m >= 2 and k >= 1. density_scale starts at the provisional 2^(m+k).
SpaceParams derive_params(int m, int k);

/// Radial volume density A(r) = s sinh(r/2)^(m+k) cosh(r/2)^k.
double density(const SpaceParams& p, double r);

/// d/dr log A(r) = (m+k)/2 coth(r/2) + k/2 tanh(r/2), r > 0.
double log_density_derivative(const SpaceParams& p, double r);

/// Parses the key=value config text (`m=`, `k=`, optional `density_scale=`).
/// Blank lines and lines starting with '#' are ignored.
SpaceParams parse_params_config(const std::string& text);
std::string format_params_config(const SpaceParams& p);

}  // namespace drspher
