#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "drspher/plancherel.hpp"
#include "drspher/spherical.hpp"

using namespace drspher;
constexpr double pi = std::numbers::pi;

TEST(Plancherel, DensityClosedFormForDefaultSpace) {
  // (m,k) = (2,1): |Gamma(1 + i l)|^2 = pi l / sinh(pi l) collapses the density
  // to pi l^3 coth(pi l) / 4.
  const Plancherel pl(derive_params(2, 1));
  for (double l : {0.05, 0.5, 1.0, 3.0, 8.0}) {
    const double want = pi * l * l * l / std::tanh(pi * l) / 4.0;
    EXPECT_NEAR(pl.density(l) / want, 1.0, 1e-12) << l;
  }
  EXPECT_EQ(pl.density(0.0), 0.0);
}

TEST(Plancherel, DensityIsEvenAndMatchesCFunction) {
  const Plancherel pl(derive_params(4, 3));
  for (double l : {0.3, 1.7, 6.0}) {
    EXPECT_NEAR(pl.density(-l) / pl.density(l), 1.0, 1e-14);
    EXPECT_NEAR(pl.density(l) * std::norm(pl.c_function(l)), 1.0, 1e-12);
  }
}

TEST(Plancherel, InversionConstant) {
  // c0 = 2^(k-2) pi^(-n/2-1) Gamma(n/2)
  EXPECT_NEAR(Plancherel(derive_params(2, 1)).c0(), 0.5 * std::pow(pi, -3.0), 1e-16);
  EXPECT_NEAR(Plancherel(derive_params(4, 3)).c0(), 2.0 * std::pow(pi, -5.0) * 6.0, 1e-16);
  EXPECT_NEAR(inversion_constant(4, 3), Plancherel(derive_params(4, 3)).c0(), 1e-18);
}

TEST(Plancherel, AsymptoticFitReproducesC) {
  for (auto [m, k] : {std::pair{2, 1}, std::pair{4, 3}}) {
    const SphericalEvaluator ev(derive_params(m, k));
    const Plancherel pl(ev.params());
    for (double l : {1.0, 2.0, 4.0}) {
      const auto fit = fit_asymptotic_c(ev, l, 25.0);
      EXPECT_LT(std::abs(fit - pl.c_function(l)) / std::abs(pl.c_function(l)), 1e-6);
    }
  }
}
