#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "drspher/error.hpp"
#include "drspher/gamma.hpp"
#include "drspher/quadrature.hpp"
#include "drspher/spline.hpp"

using namespace drspher;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST(Gamma, RealAxisMatchesStd) {
  for (double x : {0.3, 1.0, 2.5, 7.25, 30.0}) EXPECT_NEAR(lgamma_complex(x).real(), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
}

TEST(Gamma, Recurrence) {
  for (cd z : {cd(0.7, 0.3), cd(2.0, -5.0), cd(0.1, 12.0)}) {
    const cd lhs = gamma_complex(z + 1.0);
    const cd rhs = z * gamma_complex(z);
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-13);
  }
}

TEST(Gamma, Reflection) {
  for (cd z : {cd(0.3, 0.4), cd(-1.7, 0.2), cd(0.5, 3.0)}) {
    const cd lhs = gamma_complex(z) * gamma_complex(1.0 - z);
    const cd rhs = pi / std::sin(pi * z);
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-12);
  }
}

TEST(Gamma, AbsSquareOnImaginaryLines) {
  // |Gamma(i y)|^2 = pi / (y sinh(pi y)), |Gamma(1/2 + i y)|^2 = pi / cosh(pi y)
  for (double y : {0.2, 1.0, 4.0, 15.0}) {
    EXPECT_NEAR(log_abs_gamma_sq(0.0, y), std::log(pi / (y * std::sinh(pi * y))), 1e-12);
    EXPECT_NEAR(log_abs_gamma_sq(0.5, y), std::log(pi / std::cosh(pi * y)), 1e-12);
  }
}

TEST(Quadrature, AdaptiveKnownIntegrals) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::sin(x); }, 0, pi).value, 2.0, 1e-14);
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::exp(-x * x); }, -10, 10).value, std::sqrt(pi), 1e-13);
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1, 1e-12, 1e-12).value, 2.0 / 3.0, 1e-11);
}

TEST(Quadrature, AdaptiveBudgetExhausted) {
  EXPECT_THROW(integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0, 1, 1e-15, 0, 20),
               NumericalError);
}

TEST(Quadrature, GaussLegendreExactness) {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  for (int p = 0; p < 20; ++p) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-14) << p;
  }
}

TEST(Quadrature, PanelRuleAndTrapezoid) {
  const auto rule = PanelRule::with_width(0, 3, 0.25);
  EXPECT_EQ(rule.panels, 12);
  std::vector<double> f(rule.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(rule.nodes[i]);
  const auto q = drspher::apply(rule, f);
  EXPECT_NEAR(q.value, std::exp(3.0) - 1.0, 1e-13);
  EXPECT_LT(q.error, 1e-10);

  const UniformGrid g{-2, 2, 33};
  double s = 0;
  for (double w : trapezoid_weights(g)) s += w;
  EXPECT_NEAR(s, 4.0, 1e-15);
  EXPECT_TRUE(UniformGrid::symmetric(8, 129).is_symmetric());
}

TEST(Spline, InterpolatesSmoothData) {
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::cos(x.back()));
  }
  const CubicSpline s(x, y, 0.0);
  double err = 0;
  for (double t = 0; t <= 3.0; t += 0.013) err = std::max(err, std::abs(s(t) - std::cos(t)));
  EXPECT_LT(err, 1e-5);
  EXPECT_NEAR(s(2.05), std::cos(2.05), 1e-6);
  EXPECT_GT(s.error_bound(), 0.0);
}
