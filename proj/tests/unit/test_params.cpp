#include <gtest/gtest.h>

#include <cmath>

#include "drspher/error.hpp"
#include "drspher/params.hpp"

using namespace drspher;

TEST(Params, DerivedQuantities) {
  const auto p = derive_params(2, 1);
  EXPECT_EQ(p.Q, Rational::make(2, 1));
  EXPECT_EQ(p.rho, Rational::make(1, 1));
  EXPECT_EQ(p.n, 4);
  const auto q = derive_params(4, 3);
  EXPECT_EQ(q.Q, Rational::make(5, 1));
  EXPECT_EQ(q.rho, Rational::make(5, 2));
  EXPECT_EQ(q.n, 8);
  const auto h = derive_params(6, 1);
  EXPECT_EQ(h.rho, Rational::make(2, 1));
}

TEST(Params, RejectsInadmissible) {
  EXPECT_THROW(derive_params(3, 1), DomainError);
  EXPECT_THROW(derive_params(0, 1), DomainError);
  EXPECT_THROW(derive_params(2, 0), DomainError);
}

TEST(Params, RationalReduces) {
  EXPECT_EQ(Rational::make(6, -4), Rational::make(-3, 2));
  EXPECT_EQ(Rational::make(6, -4).den, 2);
  EXPECT_THROW(Rational::make(1, 0), DomainError);
}

TEST(Params, DensityMatchesClosedForm) {
  auto p = derive_params(4, 3);
  p.density_scale = 3.5;
  for (double r : {0.1, 1.0, 4.0}) {
    const double want = 3.5 * std::pow(std::sinh(r / 2), 7) * std::pow(std::cosh(r / 2), 3);
    EXPECT_NEAR(density(p, r) / want, 1.0, 1e-14);
  }
}

TEST(Params, LogDensityDerivativeMatchesDifferences) {
  const auto p = derive_params(2, 1);
  for (double r : {0.3, 1.0, 5.0}) {
    const double h = 1e-5;
    const double fd = (std::log(density(p, r + h)) - std::log(density(p, r - h))) / (2 * h);
    EXPECT_NEAR(log_density_derivative(p, r), fd, 1e-8);
  }
}

TEST(Params, ConfigRoundTrip) {
  auto p = derive_params(4, 3);
  p.density_scale = 1234.5;
  const auto q = parse_params_config(format_params_config(p));
  EXPECT_EQ(q.m, 4);
  EXPECT_EQ(q.k, 3);
  EXPECT_EQ(q.density_scale, 1234.5);
  EXPECT_THROW(parse_params_config("m=2\n"), FormatError);
  EXPECT_THROW(parse_params_config("m=two\nk=1\n"), FormatError);
  EXPECT_THROW(parse_params_config("m=2\nk=1\ndensity_scale=-1\n"), DomainError);
}
