#include "drspher/gamma.hpp"

#include <cmath>
#include <numbers>

#include "drspher/error.hpp"

namespace drspher {

namespace {

constexpr double kG = 7.0;
constexpr double kCoeff[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,      -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lanczos(std::complex<double> z) {
  // log Gamma(z) for Re z >= 1/2
  z -= 1.0;
  std::complex<double> x = kCoeff[0];
  for (int i = 1; i < 9; ++i) x += kCoeff[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) without overflow for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
  const double y = z.imag();
  if (std::abs(y) < 30.0) return std::log(std::sin(std::numbers::pi * z));
  // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential.
  const std::complex<double> i(0.0, 1.0);
  if (y > 0) {
    // dominant: -e^{-i pi z}/(2i)
    const std::complex<double> small = std::exp(2.0 * i * std::numbers::pi * z);
    return -i * std::numbers::pi * z + std::log((small - 1.0) / (2.0 * i));
  }
  const std::complex<double> small = std::exp(-2.0 * i * std::numbers::pi * z);
  return i * std::numbers::pi * z + std::log((1.0 - small) / (2.0 * i));
}

}  // namespace

std::complex<double> lgamma_complex(std::complex<double> z) {
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && z.real() == std::floor(z.real())) {
      throw DomainError("lgamma_complex: pole at non-positive integer");
    }
    return std::log(std::numbers::pi) - log_sin_pi(z) - lanczos(1.0 - z);
  }
  return lanczos(z);
}

double log_abs_gamma_sq(double x, double y) { return 2.0 * lgamma_complex({x, y}).real(); }

}  // namespace drspher
