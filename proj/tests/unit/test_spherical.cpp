#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "common.hpp"
#include "drspher/error.hpp"
#include "drspher/spherical.hpp"

using namespace drspher;
using drspher::test::linspace;
using cd = std::complex<double>;

namespace {

// Classical RK4 on u'' = -(A'/A) u' - (lambda^2 + rho^2) u from r0 with
// hypergeometric initial data; an independent route to phi_lambda(r1).
cd rk4_phi(const SpaceParams& p, cd lambda, double r0, double r1, int steps) {
  const cd kappa = lambda * lambda + p.rho_value() * p.rho_value();
  cd u = test::phi_hyp(p, lambda, r0), v = test::dphi_hyp(p, lambda, r0);
  const double h = (r1 - r0) / steps;
  const auto f = [&](double r, cd uu, cd vv, cd& du, cd& dv) {
    du = vv;
    dv = -log_density_derivative(p, r) * vv - kappa * uu;
  };
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    cd k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(r, u, v, k1u, k1v);
    f(r + h / 2, u + h / 2 * k1u, v + h / 2 * k1v, k2u, k2v);
    f(r + h / 2, u + h / 2 * k2u, v + h / 2 * k2v, k3u, k3v);
    f(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
    u += h / 6 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    r += h;
  }
  return u;
}

}  // namespace

class SphericalBySpace : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(SphericalBySpace, MatchesHypergeometricSeriesNearOrigin) {
  const auto [m, k] = GetParam();
  const SphericalEvaluator ev(derive_params(m, k));
  for (cd l : {cd(0.0), cd(0.5), cd(3.0), cd(0.0, 0.7), cd(1.5, 0.4)})
    for (double r : {0.0, 0.2, 0.45, 0.8, 1.2, 1.6}) {
      const cd want = test::phi_hyp(ev.params(), l, r);
      EXPECT_LT(std::abs(ev.eval(l, r) - want), 1e-10) << l << " r=" << r;
    }
}

TEST_P(SphericalBySpace, MatchesIndependentIntegrator) {
  const auto [m, k] = GetParam();
  const SphericalEvaluator ev(derive_params(m, k));
  for (cd l : {cd(0.0), cd(1.0), cd(4.0), cd(0.0, 0.5), cd(2.0, 0.3)}) {
    const cd want = rk4_phi(ev.params(), l, 1.0, 12.0, 22000);
    const double scale = std::abs(ev.eval(0.0, 12.0));
    EXPECT_LT(std::abs(ev.eval(l, 12.0) - want), 1e-6 * scale) << l;
  }
}

TEST_P(SphericalBySpace, EigenEquation) {
  const auto [m, k] = GetParam();
  const SphericalEvaluator ev(derive_params(m, k));
  const double rho = ev.params().rho_value();
  for (cd l : {cd(0.0), cd(2.0), cd(0.0, rho), cd(1.0, 0.5)})
    for (double r : {0.1, 1.0, 7.0, 19.0}) EXPECT_LT(ev.eigen_residual(l, r), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Spaces, SphericalBySpace, ::testing::Values(std::pair{2, 1}, std::pair{4, 3}, std::pair{6, 2}));

TEST(Spherical, TrivialAndUnitValues) {
  const SphericalEvaluator ev(derive_params(2, 1));
  for (double r : linspace(0, 30, 31)) EXPECT_NEAR(ev.eval(cd(0, 1), r).real(), 1.0, 1e-12);
  EXPECT_EQ(ev.eval(2.5, 0.0), cd(1.0, 0.0));
}

TEST(Spherical, BatchAgreesWithPointwise) {
  const SphericalEvaluator ev(derive_params(4, 3));
  const auto rs = linspace(0, 10, 41);
  const auto row = ev.real_row(1.3, rs);
  const auto irow = ev.imaginary_row(0.8, rs);
  const auto crow = ev.eval_many(cd(1.3, 0.2), rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_NEAR(row[i], ev.eval(1.3, rs[i]).real(), 1e-13);
    EXPECT_NEAR(irow[i], ev.eval(cd(0, 0.8), rs[i]).real(), 1e-13);
    EXPECT_LT(std::abs(crow[i] - ev.eval(cd(1.3, 0.2), rs[i])), 1e-13);
  }
}

TEST(Spherical, DomainChecks) {
  const SphericalEvaluator ev(derive_params(2, 1));
  EXPECT_THROW(ev.eval(cd(0, 4.5), 1.0), DomainError);
  EXPECT_THROW(ev.eval(1.0, -0.1), DomainError);
  EXPECT_THROW(ev.eval(cd(NAN, 0), 1.0), DomainError);
  const std::vector<double> descending{2.0, 1.0};
  EXPECT_THROW(ev.real_row(1.0, descending), DomainError);
  EXPECT_THROW(ev.eigen_residual(1.0, 0.0), DomainError);
}
