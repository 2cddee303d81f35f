#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "drspher/error.hpp"
#include "drspher/heat.hpp"
#include "drspher/transform.hpp"

using namespace drspher;
using drspher::test::linspace;
using drspher::test::space21;
using drspher::test::space43;
constexpr double pi = std::numbers::pi;

namespace {

RadialProfile bump(double R) {
  return RadialProfile::from_rule(
      [R](std::span<const double> rs) {
        std::vector<double> v;
        for (double r : rs) v.push_back(r < R ? std::exp(-1.0 / (1.0 - (r / R) * (r / R))) : 0.0);
        return v;
      },
      DecayClass::compact, R);
}

}  // namespace

TEST(Calibration, MatchesAnalyticScale) {
  // 2^(m+2k) / (4 pi c0), c0 = 2^(k-2) pi^(-n/2-1) Gamma(n/2)
  const auto expected = [](int m, int k) {
    const int n = m + k + 1;
    const double c0 = std::pow(2.0, k - 2) * std::pow(pi, -n / 2.0 - 1.0) * std::tgamma(n / 2.0);
    return std::pow(2.0, m + 2 * k) / (4.0 * pi * c0);
  };
  EXPECT_NEAR(space21().params().density_scale / (8.0 * pi * pi), 1.0, 1e-10);
  EXPECT_NEAR(space21().params().density_scale / expected(2, 1), 1.0, 1e-10);
  EXPECT_NEAR(space43().params().density_scale / expected(4, 3), 1.0, 1e-10);
  EXPECT_NEAR(jacobi_density_scale(4, 3) / expected(4, 3), 1.0, 1e-14);
}

TEST(Transform, CompactProfileAgainstAdaptiveQuadrature) {
  const Space& s = space21();
  const auto f = bump(3.0);
  const UniformGrid grid{0.0, 6.0, 13};
  const auto res = spherical_transform(s, f, grid);
  for (int i = 0; i < grid.count; ++i) {
    const double l = grid.at(i);
    const auto want = integrate_adaptive(
        [&](double r) {
          const double fr = r < 3.0 ? std::exp(-1.0 / (1.0 - r * r / 9.0)) : 0.0;
          return fr * s.spherical().eval(l, r).real() * s.volume(r);
        },
        0.0, 3.0, 1e-15, 1e-13);
    EXPECT_NEAR(res.spectrum.values[static_cast<std::size_t>(i)], want.value, 1e-11) << l;
  }
  EXPECT_EQ(res.cutoff, 3.0);
}

TEST(Transform, HeatRoundTripBothSpaces) {
  for (const Space* s : {&space21(), &space43()}) {
    const auto grid = UniformGrid::symmetric(8.0, 129);
    for (double t : {0.5, 1.0}) {
      const auto pt = heat_kernel(*s, t);
      const auto fwd = spherical_transform(*s, pt.profile, grid);
      const auto G = heat_multiplier(*s, t, grid);
      for (std::size_t i = 0; i < G.values.size(); ++i) EXPECT_NEAR(fwd.spectrum.values[i], G.values[i], 1e-10);
    }
  }
}

TEST(Transform, HeatMassIsOne) {
  // int p_t A dr = p_t^(i rho) = 1
  for (double t : {0.5, 1.0, 2.0}) EXPECT_NEAR(radial_integral(space21(), heat_kernel(space21(), t).profile).value, 1.0, 1e-8);
}

TEST(Transform, HeatMassUnresolvableWithFastGrowth) {
  // For (4,3) the mass integrand is swamped by synthesis noise times e^(2 rho r).
  EXPECT_THROW(radial_integral(space43(), heat_kernel(space43(), 2.0).profile), TruncationError);
}

TEST(Transform, InverseDetectsTruncation) {
  const auto F = SpectralFunction::sample(UniformGrid::symmetric(8, 129), [](double) { return 1.0; });
  EXPECT_THROW(inverse_transform(space21(), F, linspace(0, 2, 5)), TruncationError);
}

TEST(Transform, MeasureTransformIsAtomicSum) {
  const Space& s = space21();
  const RadialMeasure th{{0.5, 2.0}, {0.25, 0.75}};
  const auto grid = UniformGrid::symmetric(4, 33);
  const auto F = transform_measure(s, th, grid);
  for (int i = 0; i < grid.count; ++i) {
    const double l = grid.at(i);
    EXPECT_NEAR(F.values[static_cast<std::size_t>(i)],
                0.25 * s.spherical().eval(l, 0.5).real() + 0.75 * s.spherical().eval(l, 2.0).real(), 1e-14);
  }
  EXPECT_NEAR(th.phi0_mass(s), 0.25 * s.spherical().eval(0, 0.5).real() + 0.75 * s.spherical().eval(0, 2.0).real(),
              1e-14);
}

TEST(Fourier, GaussianPair) {
  EvenSamples g{UniformGrid::symmetric(20, 801), {}};
  for (double t : g.grid.points()) g.values.push_back(std::exp(-t * t / 2));
  const auto F = euclidean_fourier(g, UniformGrid::symmetric(5, 41));
  for (int i = 0; i < 41; ++i) {
    const double l = F.grid.at(i);
    EXPECT_NEAR(F.values[static_cast<std::size_t>(i)], std::sqrt(2 * pi) * std::exp(-l * l / 2), 1e-12);
  }
  EXPECT_THROW(euclidean_fourier(g, UniformGrid::symmetric(80, 41)), NumericalError);

  const auto back = inverse_euclidean_fourier(
      SpectralFunction::sample(UniformGrid::symmetric(12, 385), [](double l) { return std::sqrt(2 * pi) * std::exp(-l * l / 2); }),
      UniformGrid::symmetric(4, 33));
  for (int i = 0; i < 33; ++i) {
    const double t = back.grid.at(i);
    EXPECT_NEAR(back.values[static_cast<std::size_t>(i)], std::exp(-t * t / 2), 1e-13);
  }
}

TEST(Abel, HeatKernelIsEuclideanGaussian) {
  // A p_t(s) = e^(-t rho^2) (4 pi t)^(-1/2) e^(-s^2 / 4t)
  for (const Space* s : {&space21(), &space43()}) {
    const double rho = s->rho();
    for (double t : {0.5, 2.0}) {
      const auto a = abel_transform(*s, heat_kernel(*s, t).profile, UniformGrid::symmetric(6, 49));
      for (int i = 0; i < 49; ++i) {
        const double x = a.grid.at(i);
        const double want = std::exp(-t * rho * rho) / std::sqrt(4 * pi * t) * std::exp(-x * x / (4 * t));
        EXPECT_NEAR(a.values[static_cast<std::size_t>(i)], want, 1e-9);
      }
    }
  }
}

TEST(Abel, MeasureOfSingleAtom) {
  const Space& s = space21();
  const RadialMeasure th{{2.0}, {1.0}};
  std::vector<double> ts;
  for (int j = 0; j <= 200; ++j) ts.push_back(0.01 * j);
  const auto res = abel_of_measure(s, th, ts);
  EXPECT_LT(res.residual, 1e-6);
  for (double w : res.measure.masses) EXPECT_GE(w, 0.0);
  EXPECT_NEAR(res.measure.total(), s.spherical().eval(0.0, 2.0).real(), 1e-5);
}

TEST(Profiles, SamplesAndValidation) {
  const auto f = RadialProfile::from_samples({0, 1, 2, 3}, {1, 0.5, 0.25, 0.1});
  EXPECT_DOUBLE_EQ(f.at(1.0), 0.5);
  EXPECT_EQ(f.at(3.5), 0.0);
  EXPECT_THROW(RadialProfile::from_samples({0, 2, 1, 3}, {1, 1, 1, 1}).validate(), DomainError);

  auto odd = SpectralFunction::sample(UniformGrid::symmetric(1, 9), [](double l) { return l; });
  EXPECT_THROW(odd.validate(), DomainError);
  odd.even = false;
  EXPECT_NO_THROW(odd.validate());
  EXPECT_NEAR(odd.asymmetry(), 2.0, 1e-15);
}
