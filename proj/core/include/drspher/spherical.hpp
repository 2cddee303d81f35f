#pragma once

#include <Eigen/Core>
#include <complex>
#include <span>
#include <vector>

#include "drspher/params.hpp"

namespace drspher {

struct SphericalOptions {
  /// Below this radius phi is summed from its even power series in r.
  double series_radius = 0.5;
  /// Target accuracy (relative to the local amplitude of phi).
  double tolerance = 1e-10;
};

/// Spherical functions phi_lambda(r): the even solution of
///   u'' + (A'/A) u' + (lambda^2 + rho^2) u = 0,  u(0) = 1,
/// in the geodesic radius r. Near the regular singular point r = 0 the
/// solution is the power series 1 + sum a_j r^(2j); from series_radius on it
/// is continued by Gragg-Bulirsch-Stoer extrapolation. lambda and -lambda
/// give identical results (only lambda^2 enters), and for lambda real or
/// purely imaginary the computation runs in real arithmetic.
class SphericalEvaluator {
 public:
  explicit SphericalEvaluator(const SpaceParams& params, SphericalOptions options = {});

  const SpaceParams& params() const { return params_; }
  const SphericalOptions& options() const { return options_; }

  /// Largest |Im lambda| accepted (4 rho).
  double strip_half_width() const;

  std::complex<double> eval(std::complex<double> lambda, double r) const;

  /// phi_lambda at ascending radii, one ODE sweep.
  std::vector<std::complex<double>> eval_many(std::complex<double> lambda, std::span<const double> rs) const;

  /// Real-arithmetic row for real lambda.
  std::vector<double> real_row(double lambda, std::span<const double> rs) const;
  /// Real-arithmetic row for lambda = i mu (mu real, |mu| <= 4 rho).
  std::vector<double> imaginary_row(double mu, std::span<const double> rs) const;

  /// |u'' + (A'/A) u' + (lambda^2 + rho^2) u| at r > 0 from five-point
  /// finite differences of eval().
  double eigen_residual(std::complex<double> lambda, double r) const;

  /// [i][j] = phi_{lambda_i}(r_j); radii must be ascending.
  Eigen::MatrixXcd phi_grid(std::span<const std::complex<double>> lambdas, std::span<const double> rs) const;

  /// Coefficients p_l of r A'(r)/A(r) = sum_l p_l r^(2l).
  const std::vector<double>& log_density_series() const { return p_series_; }

 private:
  template <class T>
  std::vector<T> solve(T kappa, std::span<const double> rs) const;
  void check_strip(std::complex<double> lambda) const;

  SpaceParams params_;
  SphericalOptions options_;
  std::vector<double> p_series_;
};

/// Writes `lambda_re,lambda_im,r,phi_re,phi_im` rows for one lambda.
void write_phi_csv(std::ostream& os, std::complex<double> lambda, std::span<const double> rs,
                   std::span<const std::complex<double>> values);

}  // namespace drspher
