#include "drspher/plancherel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "drspher/error.hpp"
#include "drspher/gamma.hpp"
#include "drspher/spherical.hpp"

namespace drspher {

namespace {

double log_sinh(double x) {
  if (x > 1.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
  return std::log(std::sinh(x));
}

}  // namespace

double inversion_constant(int m, int k) {
  const int n = m + k + 1;
  const long double pi = std::numbers::pi_v<long double>;
  const long double v = std::pow(2.0L, k - 2) * std::pow(pi, -0.5L * n - 1.0L) * std::tgamma(0.5L * n);
  return static_cast<double>(v);
}

Plancherel::Plancherel(const SpaceParams& params)
    : params_(params),
      c0_(inversion_constant(params.m, params.k)),
      log_norm_(2.0 * params.q() * std::log(2.0) + 2.0 * std::lgamma(0.5 * params.n)) {}

std::complex<double> Plancherel::c_function(double lambda) const {
  if (std::abs(lambda) < 1e-8) throw DomainError("c_function: lambda too close to the pole at 0");
  const std::complex<double> i(0.0, 1.0);
  const double rho = params_.rho_value();
  const double shift = 0.25 * params_.m + 0.5;
  const std::complex<double> log_c = (params_.q() - 2.0 * i * lambda) * std::log(2.0) +
                                     std::lgamma(0.5 * params_.n) + lgamma_complex(2.0 * i * lambda) -
                                     lgamma_complex(rho + i * lambda) - lgamma_complex(shift + i * lambda);
  return std::exp(log_c);
}

double Plancherel::density(double lambda) const {
  const double x = std::abs(lambda);
  if (x == 0.0) return 0.0;
  const double rho = params_.rho_value();
  const double shift = 0.25 * params_.m + 0.5;
  // |Gamma(2 i x)|^-2 = 2x sinh(2 pi x) / pi
  const double log_d = log_abs_gamma_sq(rho, x) + log_abs_gamma_sq(shift, x) + std::log(2.0 * x) +
                       log_sinh(2.0 * std::numbers::pi * x) - std::log(std::numbers::pi) - log_norm_;
  return std::exp(log_d);
}

std::complex<double> fit_asymptotic_c(const SphericalEvaluator& ev, double lambda, double r_center) {
  if (!(lambda > 0.0)) throw DomainError("fit_asymptotic_c: lambda must be positive");
  const double period = 2.0 * std::numbers::pi / lambda;
  const double half = std::min(period, 2.0);
  constexpr int kSamples = 41;
  std::vector<double> rs(kSamples);
  for (int j = 0; j < kSamples; ++j) rs[j] = r_center - half + 2.0 * half * j / (kSamples - 1);
  const auto phi = ev.real_row(lambda, rs);
  const double rho = ev.params().rho_value();
  Eigen::MatrixXd design(kSamples, 2);
  Eigen::VectorXd rhs(kSamples);
  for (int j = 0; j < kSamples; ++j) {
    design(j, 0) = std::cos(lambda * rs[j]);
    design(j, 1) = std::sin(lambda * rs[j]);
    rhs(j) = std::exp(rho * rs[j]) * phi[j];
  }
  const Eigen::Vector2d ab = design.colPivHouseholderQr().solve(rhs);
  return {0.5 * ab(0), -0.5 * ab(1)};
}

void write_density_csv(std::ostream& os, const Plancherel& pl, std::span<const double> lambdas) {
  const auto old = os.precision(17);
  os << "lambda,density\n";
  for (double l : lambdas) os << l << ',' << pl.density(l) << '\n';
  os.precision(old);
}

}  // namespace drspher
