#pragma once

#include <complex>
#include <ostream>
#include <span>

#include "drspher/params.hpp"

namespace drspher {

class SphericalEvaluator;

/// Harish-Chandra c-function, Plancherel density |c(lambda)|^-2 and the
/// inversion constant c0 = 2^(k-2) pi^(-n/2-1) Gamma(n/2).
///
/// c(lambda) is the Jacobi c-function with alpha = (m+k-1)/2,
/// beta = (k-1)/2 at spectral parameter 2 lambda:
///
///   c(lambda) = 2^(Q - 2 i lambda) Gamma(n/2) Gamma(2 i lambda)
///               / ( Gamma(rho + i lambda) Gamma(m/4 + 1/2 + i lambda) ),
///
/// normalized so that phi_lambda(r) ~ e^(-rho r) (c(lambda) e^(i lambda r)
/// + c(-lambda) e^(-i lambda r)) as r -> infinity.
class Plancherel {
 public:
  explicit Plancherel(const SpaceParams& params);

  const SpaceParams& params() const { return params_; }
  double c0() const { return c0_; }

  /// Throws DomainError for |lambda| < 1e-8 (pole of Gamma(2 i lambda)).
  std::complex<double> c_function(double lambda) const;

  /// |c(lambda)|^-2, even, vanishing like lambda^2 at 0.
  double density(double lambda) const;

 private:
  SpaceParams params_;
  double c0_;
  double log_norm_;  // log(2^(2Q) Gamma(n/2)^2)
};

/// Closed-form value of c0 for given (m, k).
double inversion_constant(int m, int k);

/// Least-squares fit of e^(rho r) phi_lambda(r) = a cos(lambda r) + b sin(lambda r)
/// over one to two periods around r_center; returns the implied
/// c(lambda) = (a - i b)/2. Used to validate the Gamma-function formula and
/// as its fallback.
std::complex<double> fit_asymptotic_c(const SphericalEvaluator& ev, double lambda, double r_center = 25.0);

void write_density_csv(std::ostream& os, const Plancherel& pl, std::span<const double> lambdas);

}  // namespace drspher
