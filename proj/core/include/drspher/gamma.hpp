#pragma once

#include <complex>

namespace drspher {

/// Principal-branch-free log Gamma for complex argument (Lanczos, g = 7,
/// nine terms; reflection for Re z < 1/2). Only exp() of the result is used
/// downstream, so the imaginary part is determined modulo 2 pi.
std::complex<double> lgamma_complex(std::complex<double> z);

inline std::complex<double> gamma_complex(std::complex<double> z) { return std::exp(lgamma_complex(z)); }

/// log |Gamma(x + i y)|^2 for real x, y.
double log_abs_gamma_sq(double x, double y);

}  // namespace drspher
