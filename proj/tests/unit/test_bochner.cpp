#include <gtest/gtest.h>

#include "common.hpp"
#include "drspher/bochner.hpp"
#include "drspher/error.hpp"
#include "drspher/heat.hpp"

using namespace drspher;
using drspher::test::space21;

namespace {

const UniformGrid kGrid = UniformGrid::symmetric(8.0, 129);

const KernelTensor& tensor() {
  static const KernelTensor K = KernelTensor::build(space21(), kGrid);
  return K;
}

const TestFamily& family() {
  static const TestFamily f = default_test_family(space21(), kGrid);
  return f;
}

CandidateH constant(double c) { return CandidateH(SpectralFunction::sample(kGrid, [c](double) { return c; })); }

CandidateH phi_at(double r0) {
  return CandidateH(SpectralFunction::sample(kGrid, [r0](double l) { return space21().spherical().eval(l, r0).real(); }));
}

}  // namespace

TEST(Family, DeterministicAndSeeded) {
  const auto a = default_test_family(space21(), kGrid);
  const auto& b = family();
  ASSERT_EQ(a.members.size(), 64u);
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    EXPECT_EQ(a.members[i].label, b.members[i].label);
    EXPECT_EQ(a.members[i].re.values, b.members[i].re.values);
  }
  const auto c = default_test_family(space21(), kGrid, 99);
  EXPECT_NE(a.members.back().re.values, c.members.back().re.values);
}

TEST(Certify, Verdicts) {
  const Space& s = space21();
  EXPECT_EQ(certify(s, tensor(), CandidateH(heat_multiplier(s, 1.0, kGrid)), family()).verdict, Verdict::pass);
  EXPECT_EQ(certify(s, tensor(), phi_at(1.0), family()).verdict, Verdict::pass);
  const auto neg = certify(s, tensor(), constant(-1.0), family());
  EXPECT_EQ(neg.verdict, Verdict::fail);
  ASSERT_FALSE(neg.witnesses.empty());
  EXPECT_LT(neg.witnesses.front().normalized, -neg.tolerance);
  const auto sq = certify(s, tensor(), CandidateH(SpectralFunction::sample(kGrid, [](double l) { return l * l; })), family());
  EXPECT_EQ(sq.verdict, Verdict::fail);
  EXPECT_STREQ(to_string(Verdict::inconclusive), "inconclusive");
}

TEST(Certify, ClosureOfCertifiedPair) {
  const Space& s = space21();
  const auto rep = p0_closure_check(s, tensor(), CandidateH(heat_multiplier(s, 0.5, kGrid)), phi_at(2.0), family());
  EXPECT_TRUE(rep.all_pass());
  EXPECT_THROW(p0_closure_check(s, tensor(), constant(1), constant(1), family(), -1.0), DomainError);
}

TEST(Candidate, Validation) {
  EXPECT_THROW(CandidateH(SpectralFunction::sample(kGrid, [](double l) { return l; })), DomainError);
  const auto h = CandidateH(heat_multiplier(space21(), 1.0, UniformGrid::symmetric(4.0, 65)));
  EXPECT_THROW(h.on_grid(kGrid), DomainError);
  EXPECT_NEAR(h.on_grid(UniformGrid::symmetric(4.0, 33)).at(1.0), std::exp(-2.0), 1e-14);
}

TEST(Recover, SyntheticAtomsAndMassCap) {
  const Space& s = space21();
  std::vector<double> rg;
  for (int j = 0; j <= 100; ++j) rg.push_back(0.05 * j);
  const RadialMeasure th{{0.5, 2.0, 4.0}, {0.2, 0.5, 0.3}};
  const CandidateH h(transform_measure(s, th, kGrid));
  const auto rec = recover_measure(s, h, rg);
  EXPECT_TRUE(rec.representable);
  EXPECT_NEAR(rec.measure.weights[10], 0.2, 1e-8);
  EXPECT_NEAR(rec.measure.weights[40], 0.5, 1e-8);
  EXPECT_NEAR(rec.measure.weights[80], 0.3, 1e-8);
  EXPECT_LE(rec.phi0_mass, h.at(0.0) + 1e-6);

  // a Gaussian needs radii well past r = 5 for an exact fit, but the mass cap holds regardless
  const CandidateH g(heat_multiplier(s, 1.0, kGrid));
  const auto rg_short = recover_measure(s, g, rg);
  EXPECT_LE(rg_short.phi0_mass, g.at(0.0) + 1e-6);
}

TEST(Krein, Phi0AndConstant) {
  const Space& s = space21();
  const auto phi0 = RadialProfile::from_rule([&](std::span<const double> r) { return s.spherical().real_row(0.0, r); },
                                             DecayClass::gaussian);
  const auto a = krein_fit(s, phi0);
  EXPECT_LT(a.residual, 1e-5);
  EXPECT_NEAR(a.mu1[0], 1.0, 1e-6);
  EXPECT_TRUE(a.mass_ok);
  EXPECT_TRUE(a.positive_definite);

  const auto one = RadialProfile::from_rule([](std::span<const double> r) { return std::vector<double>(r.size(), 1.0); },
                                            DecayClass::gaussian);
  const auto b = krein_fit(s, one);
  EXPECT_NEAR(b.imaginary_lambdas.back(), s.rho(), 1e-15);
  EXPECT_NEAR(b.mu2.back(), 1.0, 1e-6);
  for (double l : b.imaginary_lambdas) EXPECT_GT(l, 0.0);
}

TEST(PdCheck, ExactKnotsAndSpline) {
  const auto g = CandidateH(heat_multiplier(space21(), 1.0, kGrid));
  const auto rep = pd_check(g, 0.5, 12);
  EXPECT_TRUE(rep.psd);
  EXPECT_EQ(rep.interpolation_error, 0.0);

  // off-knot lags go through the spline; a smooth h passes its error check
  const auto smooth = CandidateH(heat_multiplier(space21(), 0.05, kGrid));
  const auto off = pd_check(smooth, 0.3, 12);
  EXPECT_GT(off.interpolation_error, 0.0);
  EXPECT_TRUE(off.psd);
  // a sharply varying h on the same grid does not
  const auto sharp = CandidateH(SpectralFunction::sample(kGrid, [](double l) { return std::cos(7.0 * l); }));
  EXPECT_THROW(pd_check(sharp, 0.3, 12), NumericalError);

  const auto sq = CandidateH(SpectralFunction::sample(kGrid, [](double l) { return -l * l; }));
  EXPECT_FALSE(pd_check(sq, 0.5, 12).psd);
  EXPECT_THROW(pd_check(g, 1.0, 12), DomainError);
}

TEST(PdCheck, FourierRoute) {
  const auto rep = pd_check_fourier(space21(), phi_at(2.0), RadialMeasure{{2.0}, {1.0}}, 0.5, 12);
  EXPECT_TRUE(rep.report.psd);
  EXPECT_LT(rep.max_entry_gap, 1e-6);
  EXPECT_LT(rep.abel_residual, 1e-6);
}
