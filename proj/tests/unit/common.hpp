#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "drspher/space.hpp"

namespace drspher::test {

// Calibrated spaces are deterministic; build each once per process.
inline const Space& space21() {
  static const Space s = calibrated_space(2, 1);
  return s;
}
inline const Space& space43() {
  static const Space s = calibrated_space(4, 3);
  return s;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return x;
}

// Gauss 2F1(a, b; c; z) by direct summation, |z| < 1.
inline std::complex<double> hyp2f1(std::complex<double> a, std::complex<double> b, double c, double z) {
  std::complex<double> term = 1.0, sum = 1.0;
  for (int j = 0; j < 4000; ++j) {
    term *= (a + double(j)) * (b + double(j)) / ((c + j) * (j + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// phi_lambda(r) = 2F1(rho + i lambda, rho - i lambda; n/2; -sinh^2(r/2)).
inline std::complex<double> phi_hyp(const SpaceParams& p, std::complex<double> lambda, double r) {
  const std::complex<double> i(0.0, 1.0);
  const double rho = p.rho_value();
  const double s = std::sinh(r / 2.0);
  return hyp2f1(rho + i * lambda, rho - i * lambda, p.n / 2.0, -s * s);
}

inline std::complex<double> dphi_hyp(const SpaceParams& p, std::complex<double> lambda, double r) {
  const std::complex<double> i(0.0, 1.0);
  const double rho = p.rho_value();
  const auto a = rho + i * lambda, b = rho - i * lambda;
  const double c = p.n / 2.0;
  const double s = std::sinh(r / 2.0);
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, -s * s) * (-s * std::cosh(r / 2.0));
}

}  // namespace drspher::test
