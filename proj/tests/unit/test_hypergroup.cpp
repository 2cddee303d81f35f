#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "drspher/error.hpp"
#include "drspher/heat.hpp"
#include "drspher/hypergroup.hpp"

using namespace drspher;
using drspher::test::space21;
namespace fs = std::filesystem;

namespace {

const KernelTensor& small_tensor() {
  static const KernelTensor K = KernelTensor::build(space21(), UniformGrid::symmetric(4.0, 33));
  return K;
}

const KernelTensor& full_tensor() {
  static const KernelTensor K = KernelTensor::build(space21(), UniformGrid::symmetric(8.0, 129));
  return K;
}

RadialProfile product(const RadialProfile& a, const RadialProfile& b) {
  return RadialProfile::from_rule(
      [a, b](std::span<const double> r) {
        auto x = a.evaluate(r);
        const auto y = b.evaluate(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
        return x;
      },
      DecayClass::gaussian);
}

}  // namespace

TEST(Kernel, AgainstAdaptiveQuadrature) {
  const Space& s = space21();
  const double R = kernel_cutoff(s);
  for (auto [l, m, n] : {std::array{0.0, 0.0, 0.0}, std::array{1.0, 2.0, 2.5}, std::array{3.5, 0.25, 3.0}}) {
    const auto q = integrate_adaptive(
        [&](double r) {
          return s.spherical().eval(l, r).real() * s.spherical().eval(m, r).real() * s.spherical().eval(n, r).real() *
                 s.volume(r);
        },
        0.0, R, 1e-13, 1e-11, 20000);
    EXPECT_NEAR(kernel_K(s, l, m, n).value, q.value, 1e-9 * std::max(1.0, std::abs(q.value))) << l << m << n;
  }
}

TEST(Kernel, TensorSymmetricAndOnGrid) {
  const auto& K = small_tensor();
  const int N = K.grid().count;
  for (int i = 0; i < N; i += 5)
    for (int j = 0; j < N; j += 3)
      for (int l = 0; l < N; l += 7) {
        const double v = K(i, j, l);
        EXPECT_EQ(v, K(j, i, l));
        EXPECT_EQ(v, K(l, j, i));
        EXPECT_EQ(v, K(N - 1 - i, j, l));  // only |lambda| enters
        EXPECT_GE(v, -1e-8);
      }
  EXPECT_NEAR(K(20, 25, 30), kernel_K(space21(), K.grid().at(20), K.grid().at(25), K.grid().at(30)).value, 1e-12);
  EXPECT_LT(K.max_error(), 1e-8);
}

TEST(Kernel, CacheRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / ("drspher-unit-cache-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  const auto grid = UniformGrid::symmetric(2.0, 9);
  bool hit = true;
  const auto a = KernelTensor::cached(space21(), grid, dir, false, &hit);
  EXPECT_FALSE(hit);
  const auto b = KernelTensor::cached(space21(), grid, dir, false, &hit);
  EXPECT_TRUE(hit);
  ASSERT_EQ(a.values().size(), b.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_EQ(a.values()[i], b.values()[i]);
  EXPECT_EQ(a.max_error(), b.max_error());

  EXPECT_NE(KernelTensor::cache_key(space21().params(), grid),
            KernelTensor::cache_key(space21().params(), UniformGrid::symmetric(2.0, 11)));
  EXPECT_NE(KernelTensor::cache_key(space21().params(), grid), KernelTensor::cache_key(test::space43().params(), grid));

  // a damaged entry is rebuilt, not trusted
  const auto file = KernelTensor::cache_file(dir, space21().params(), grid);
  { std::ofstream(file, std::ios::trunc) << "junk"; }
  EXPECT_THROW(KernelTensor::load(file), std::exception);
  const auto c = KernelTensor::cached(space21(), grid, dir, false, &hit);
  EXPECT_FALSE(hit);
  EXPECT_EQ(c.values()[7], a.values()[7]);
  EXPECT_THROW(b.check_space(test::space43().params()), DomainError);
  fs::remove_all(dir);
}

TEST(Odot, ProductFormulaAndCommutativity) {
  const Space& s = space21();
  const auto& K = full_tensor();
  const auto p1 = heat_kernel(s, 1.0).profile;
  const auto p2 = heat_kernel(s, 2.0).profile;
  const auto lhs = spherical_transform(s, product(p1, p2), K.grid()).spectrum;
  const auto G1 = heat_multiplier(s, 1.0, K.grid());
  const auto G2 = heat_multiplier(s, 2.0, K.grid());
  const auto ab = odot(s, K, G1, G2);
  const auto ba = odot(s, K, G2, G1);
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    EXPECT_NEAR(ab.values[i], lhs.values[i], 1e-12);
    EXPECT_NEAR(ab.values[i], ba.values[i], 1e-15);
  }
  EXPECT_LE(l1_norm(s, ab), l1_norm(s, G1) * l1_norm(s, G2));
}

TEST(Odot, DualPairingCarriesInversionConstant) {
  // int h g1 g2 A dr = c0 pairing(h^, g1^ odot g2^)
  const Space& s = space21();
  const auto& K = full_tensor();
  const auto h = heat_kernel(s, 0.5).profile;
  const auto g1 = heat_kernel(s, 1.0).profile;
  const auto g2 = heat_kernel(s, 1.5).profile;
  const double direct = radial_integral(s, product(h, product(g1, g2))).value;
  const double dual = s.c0() * pairing(s, heat_multiplier(s, 0.5, K.grid()),
                                       odot(s, K, heat_multiplier(s, 1.0, K.grid()), heat_multiplier(s, 1.5, K.grid())));
  EXPECT_NEAR(dual / direct, 1.0, 1e-9);
}

TEST(Odot, DeltaSequenceLimit) {
  // gamma_n odot A = transform(inverse(gamma_n) inverse(A)) and inverse(gamma_n) -> c0 phi_0,
  // so the limit is c0 transform(phi_0 inverse(A)), not A.
  const Space& s = space21();
  const auto& K = full_tensor();
  const auto A = heat_multiplier(s, 1.0, K.grid());
  const auto p1 = heat_kernel(s, 1.0).profile;
  const auto phi0 = RadialProfile::from_rule([&](std::span<const double> r) { return s.spherical().real_row(0.0, r); },
                                             DecayClass::gaussian);
  auto limit = spherical_transform(s, product(phi0, p1), K.grid()).spectrum;
  for (auto& v : limit.values) v *= s.c0();
  double prev = INFINITY;
  for (int n : {5, 10, 20, 40}) {
    const auto g = odot(s, K, gamma_term(s, n, K.grid()).gamma, A);
    double e = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) e = std::max(e, std::abs(g.values[i] - limit.values[i]));
    EXPECT_LT(e, prev) << n;
    prev = e;
  }
  EXPECT_LT(prev / limit.sup(), 0.05);
}

TEST(Odot, RejectsForeignGrids) {
  const Space& s = space21();
  const auto& K = small_tensor();
  const auto off = heat_multiplier(s, 1.0, UniformGrid::symmetric(4.0, 31));
  const auto on = heat_multiplier(s, 1.0, K.grid());
  EXPECT_THROW(odot(s, K, off, on), DomainError);
  const auto flat = SpectralFunction::sample(K.grid(), [](double) { return 1.0; });
  EXPECT_THROW(odot(s, K, flat, on), TruncationError);
}
