#include "drspher/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

#include "drspher/bochner.hpp"
#include "drspher/error.hpp"
#include "drspher/heat.hpp"
#include "drspher/hypergroup.hpp"
#include "drspher/plancherel.hpp"

namespace drspher {

namespace {

using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Check bound(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, "max " + sci(value) + " <= " + sci(limit)};
}

Check flag(std::string name, bool ok, std::string detail = {}) { return {std::move(name), ok, std::move(detail)}; }

double seeded_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return x;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// phi_0(r) e^(rho r) / (1 + r) on [0.5, 25], pinned from a pilot run per space.
struct Bracket {
  int m, k;
  double lo, hi;
};
constexpr Bracket kBrackets[] = {
    {2, 1, 1.0, 3.8},
    {4, 3, 2.0, 143.0},
};

// ---------------------------------------------------------------- criteria 1-5 (per space)

std::vector<Check> eigen_suite(const Space& space) {
  const auto t0 = Clock::now();
  const double rho = space.rho();
  const cd lambdas[] = {0.0, 1.0, 3.0, 2.0 * cd(0.0, 1.0) * rho / 2.0, cd(0.0, rho)};
  const auto rs = linspace(0.1, 20.0, 64);
  double worst = 0.0;
  for (const cd l : lambdas)
    for (double r : rs) worst = std::max(worst, std::abs(space.spherical().eigen_residual(l, r)));
  return {bound("eigen_residual", worst, 1e-6), flag("runtime under 10 s", elapsed(t0) < 10.0)};
}

std::vector<Check> special_values(const Space& space) {
  const auto& ev = space.spherical();
  const double rho = space.rho();
  bool exact = true;
  for (const cd l : {cd(0.0), cd(1.0), cd(3.0), cd(7.5), cd(0.0, rho / 2), cd(0.0, rho), cd(1.0, 0.3)})
    exact = exact && ev.eval(l, 0.0) == cd(1.0, 0.0);
  double trivial = 0.0;
  for (double r : linspace(0.0, 10.0, 101)) trivial = std::max(trivial, std::abs(ev.eval(cd(0.0, rho), r) - 1.0));
  double sym = 0.0;
  for (const cd l : {cd(0.5), cd(1.0), cd(3.0), cd(7.0), cd(1.0, 0.3)})
    for (double r : linspace(0.0, 20.0, 64)) sym = std::max(sym, std::abs(ev.eval(l, r) - ev.eval(-l, r)));
  return {flag("phi_lambda(0) == 1", exact), bound("|phi_i_rho - 1|", trivial, 1e-9),
          bound("|phi_lambda - phi_-lambda|", sym, 1e-10)};
}

std::vector<Check> estimate_brackets(const Space& space) {
  const auto& p = space.params();
  const Bracket* b = nullptr;
  for (const auto& e : kBrackets)
    if (e.m == p.m && e.k == p.k) b = &e;
  std::vector<Check> out;
  if (!b) {
    out.push_back(flag("bracket fixture", false, "no fixture for this space"));
    return out;
  }
  const auto rs = linspace(0.5, 25.0, 99);
  const auto phi0 = space.spherical().real_row(0.0, rs);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double q = phi0[i] * std::exp(space.rho() * rs[i]) / (1.0 + rs[i]);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  out.push_back(flag("phi_0 e^(rho r)/(1+r) bracket", lo >= b->lo && hi <= b->hi,
                     "range [" + sci(lo) + ", " + sci(hi) + "] in [" + sci(b->lo) + ", " + sci(b->hi) + "]"));

  std::mt19937_64 rng(0x5eed0003u);
  const auto grid = linspace(0.0, 25.0, 101);
  const auto phi0_full = space.spherical().real_row(0.0, grid);
  double excess = -INFINITY;
  for (int j = 0; j < 20; ++j) {
    const double l = seeded_uniform(rng, 0.0, 10.0);
    const auto row = space.spherical().real_row(l, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) excess = std::max(excess, std::abs(row[i]) - phi0_full[i]);
  }
  out.push_back(bound("|phi_lambda| - phi_0", excess, 1e-10));
  return out;
}

std::vector<Check> c_function_gate(const Space& space) {
  double worst = 0.0;
  for (double l : {1.0, 2.0, 4.0}) {
    const cd fit = fit_asymptotic_c(space.spherical(), l, 25.0);
    const cd c = space.plancherel().c_function(l);
    worst = std::max(worst, std::abs(fit - c) / std::abs(c));
  }
  return {bound("relative c(lambda) fit error", worst, 1e-4)};
}

std::vector<Check> transform_roundtrip(const Space& space) {
  const auto t0 = Clock::now();
  const auto rs = linspace(0.0, 10.0, 101);
  const HeatKernel p1 = heat_kernel(space, 1.0);
  const auto fwd = spherical_transform(space, p1.profile, heat_lambda_grid(1.0));
  const auto back = inverse_transform(space, fwd.spectrum, rs);
  const auto want = p1.profile.evaluate(rs);
  double err = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    err = std::max(err, std::abs(back.values[i] - want[i]));
    peak = std::max(peak, std::abs(want[i]));
  }
  std::vector<Check> out{bound("inverse(forward(p_1)) relative", err / peak, 1e-6)};

  const auto grid = UniformGrid::symmetric(8.0, 129);
  for (double t : {0.5, 1.0, 2.0}) {
    const HeatKernel pt = heat_kernel(space, t);
    const auto f = spherical_transform(space, pt.profile, grid);
    const auto g = heat_multiplier(space, t, grid);
    double e = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) e = std::max(e, std::abs(f.spectrum.values[i] - g.values[i]));
    out.push_back(bound("forward(p_t) vs e^(-t(lambda^2+rho^2)), t=" + sci(t), e, 1e-7));
  }
  out.push_back(flag("runtime under 60 s", elapsed(t0) < 60.0));
  return out;
}

std::vector<Check> single_space_criterion(const Space& space, int id) {
  switch (id) {
    case 1: return eigen_suite(space);
    case 2: return special_values(space);
    case 3: return estimate_brackets(space);
    case 4: return c_function_gate(space);
    case 5: return transform_roundtrip(space);
    default: throw DomainError("no single-space criterion " + std::to_string(id));
  }
}

}  // namespace

// ---------------------------------------------------------------- shared state

struct Selftest::State {
  SelftestOptions options;
  std::optional<Space> space;
  std::optional<Space> cross;
  std::optional<KernelTensor> kernel;
  std::optional<TestFamily> family;
  double kernel_seconds = 0.0;
  const UniformGrid grid = UniformGrid::symmetric(8.0, 129);

  const Space& main() {
    if (!space) space.emplace(calibrated_space(2, 1));
    return *space;
  }
  const Space& other() {
    if (!cross) cross.emplace(calibrated_space(4, 3));
    return *cross;
  }
  const KernelTensor& K() {
    if (!kernel) {
      const auto t0 = Clock::now();
      if (options.cache_dir.empty())
        kernel.emplace(KernelTensor::build(main(), grid));
      else
        kernel.emplace(KernelTensor::cached(main(), grid, options.cache_dir, options.rebuild));
      kernel_seconds = elapsed(t0);
    }
    return *kernel;
  }
  const TestFamily& tests() {
    if (!family) family.emplace(default_test_family(main(), grid));
    return *family;
  }

  std::vector<Check> abel();
  std::vector<Check> heat();
  std::vector<Check> kernel_suite();
  std::vector<Check> odot_algebra();
  std::vector<Check> bochner();
  std::vector<Check> cross_space();
};

std::vector<Check> Selftest::State::abel() {
  const Space& s = main();
  const auto p1 = heat_kernel(s, 1.0);
  const auto ts = UniformGrid::symmetric(8.0, 129);
  const auto a = abel_transform(s, p1.profile, ts);
  const double rho = s.rho();
  const double pi = std::acos(-1.0);
  double e = 0.0;
  const auto pts = ts.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double want = std::exp(-rho * rho) / std::sqrt(4.0 * pi) * std::exp(-pts[i] * pts[i] / 4.0);
    e = std::max(e, std::abs(a.values[i] - want));
  }
  return {bound("Abel(p_1) vs e^(-rho^2)(4 pi)^(-1/2) e^(-s^2/4)", e, 1e-6)};
}

std::vector<Check> Selftest::State::heat() {
  const Space& s = main();
  std::vector<Check> out;
  const int ns[] = {5, 10, 20, 40};
  double worst = 0.0;
  for (int n : ns) worst = std::max(worst, std::abs(gamma_term(s, n).normalization - 1.0));
  out.push_back(bound("|int gamma_n |c|^-2 - 1|", worst, 1e-8));
  const auto env = gamma_tail_envelope(s, ns, 1.0, 0.5);
  std::string tails;
  for (double t : env.tails) tails += (tails.empty() ? "" : " ") + sci(t);
  out.push_back(flag("tail at beta=1 decreasing", env.decreasing, tails));
  out.push_back(flag("tail within exp(-n(beta^2-alpha^2)) envelope", env.bounded));
  const auto rs = linspace(0.0, 5.0, 51);
  const int limit_ns[] = {10, 20, 50};
  const auto lim = phi0_limit_check(s, limit_ns, rs);
  out.push_back(bound("max |p_50/p_50(0) - phi_0| on [0,5]", lim.last(), 1e-3));
  return out;
}

std::vector<Check> Selftest::State::kernel_suite() {
  const Space& s = main();
  std::vector<Check> out;
  const auto g = linspace(0.0, 4.0, 6);
  std::vector<double> vals(216);
  const auto at = [&](int i, int j, int l) -> double& { return vals[static_cast<std::size_t>((i * 6 + j) * 6 + l)]; };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int l = 0; l < 6; ++l) at(i, j, l) = kernel_K(s, g[i], g[j], g[l]).value;
  double neg = 0.0, asym = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int l = 0; l < 6; ++l) {
        const double v = at(i, j, l);
        neg = std::max(neg, -v);
        for (double w : {at(i, l, j), at(j, i, l), at(j, l, i), at(l, i, j), at(l, j, i)})
          asym = std::max(asym, std::abs(v - w));
      }
  out.push_back(bound("-min K on [0,4]^3", neg, 1e-8));
  out.push_back(bound("K permutation asymmetry", asym, 1e-8));

  // c0 int K(lambda, mu, nu) phi_nu(r) |c(nu)|^-2 dnu = phi_lambda(r) phi_mu(r)
  std::mt19937_64 rng(0x5eed0008u);
  const double h = 1.0 / 16.0;
  double worst = 0.0;
  for (int q = 0; q < 5; ++q) {
    const double l = seeded_uniform(rng, 0.0, 4.0);
    const double mu = seeded_uniform(rng, 0.0, 4.0);
    const double r = seeded_uniform(rng, 0.0, 5.0);
    double sum = 0.0;
    for (int j = 1; j <= 256; ++j) {
      const double nu = j * h;
      sum += 2.0 * h * kernel_K(s, l, mu, nu).value * s.spherical().real_row(nu, std::span<const double>(&r, 1))[0] *
             s.spectral_density(nu);
    }
    sum *= s.c0();
    const double want = s.spherical().eval(l, r).real() * s.spherical().eval(mu, r).real();
    worst = std::max(worst, std::abs(sum - want));
  }
  out.push_back(bound("product formula at 5 random (lambda, mu, r)", worst, 1e-6));
  K();
  out.push_back(flag("tensor build under 10 min", kernel_seconds < 600.0));
  return out;
}

std::vector<Check> Selftest::State::odot_algebra() {
  const Space& s = main();
  const KernelTensor& T = K();
  std::vector<Check> out;
  const auto p1 = heat_kernel(s, 1.0);
  const auto sq = RadialProfile::from_rule(
      [&](std::span<const double> r) {
        auto v = p1.profile.evaluate(r);
        for (auto& x : v) x *= x;
        return v;
      },
      DecayClass::gaussian);
  const auto lhs = spherical_transform(s, sq, grid).spectrum;
  const auto G1 = heat_multiplier(s, 1.0, grid);
  const auto rhs = odot(s, T, G1, G1);
  double e = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) e = std::max(e, std::abs(lhs.values[i] - rhs.values[i]));
  out.push_back(bound("transform(p_1 p_1) vs G_1 odot G_1", e, 1e-5));

  const auto Ga = heat_multiplier(s, 0.5, grid);
  const auto Gb = heat_multiplier(s, 2.0, grid);
  const auto ab = odot(s, T, Ga, Gb);
  const auto ba = odot(s, T, Gb, Ga);
  double c = 0.0;
  for (std::size_t i = 0; i < ab.values.size(); ++i) c = std::max(c, std::abs(ab.values[i] - ba.values[i]));
  out.push_back(bound("commutativity", c, 1e-10));

  const double ts[] = {0.5, 0.75, 1.0, 1.5, 2.0};
  int ok = 0, total = 0;
  double ratio = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const auto A = heat_multiplier(s, ts[i], grid);
      const auto B = heat_multiplier(s, ts[j], grid);
      const double lhs_n = l1_norm(s, odot(s, T, A, B));
      const double rhs_n = l1_norm(s, A) * l1_norm(s, B);
      ratio = std::max(ratio, lhs_n / rhs_n);
      ++total;
      if (lhs_n <= rhs_n) ++ok;
    }
  out.push_back(flag("L1 submultiplicativity on 10 Gaussian pairs", ok == total,
                     std::to_string(ok) + "/" + std::to_string(total) + ", max ratio " + sci(ratio)));
  return out;
}

std::vector<Check> Selftest::State::bochner() {
  const Space& s = main();
  const KernelTensor& T = K();
  const TestFamily& fam = tests();
  std::vector<Check> out;

  struct Named {
    std::string label;
    CandidateH h;
  };
  const auto phi_at = [&](double r0) {
    return CandidateH(SpectralFunction::sample(grid, [&](double l) { return s.spherical().eval(l, r0).real(); }));
  };
  const auto constant = [&](double c) {
    return CandidateH(SpectralFunction::sample(grid, [c](double) { return c; }));
  };
  std::vector<Named> positive = {
      {"exp(-0.5(rho^2+lambda^2))", CandidateH(heat_multiplier(s, 0.5, grid))},
      {"exp(-(rho^2+lambda^2))", CandidateH(heat_multiplier(s, 1.0, grid))},
      {"phi_lambda(1)", phi_at(1.0)},
      {"phi_lambda(2)", phi_at(2.0)},
      {"constant 1", constant(1.0)},
      {"constant 0.25", constant(0.25)},
  };
  for (const auto& p : positive) {
    const auto rep = certify(s, T, p.h, fam);
    out.push_back(flag("certify " + p.label, rep.verdict == Verdict::pass,
                       std::string(to_string(rep.verdict)) + ", min " + sci(rep.min_value)));
  }
  const auto closure = p0_closure_check(s, T, positive[1].h, positive[2].h, fam);
  out.push_back(flag("closure: sum, product, positive multiple", closure.all_pass()));
  const auto neg = certify(s, T, constant(-1.0), fam);
  out.push_back(flag("certify constant -1 fails with witness", neg.verdict == Verdict::fail && !neg.witnesses.empty(),
                     std::string(to_string(neg.verdict)) + ", witness " +
                         (neg.witnesses.empty() ? std::string("none") : neg.witnesses.front().label)));

  // recovery of synthetic atomic measures
  std::vector<double> rg;
  for (int j = 0; j <= 200; ++j) rg.push_back(0.05 * j);
  const RadialMeasure synthetic[] = {{{1.0, 3.0}, {0.3, 0.7}}, {{0.5, 2.0, 4.0}, {0.2, 0.5, 0.3}}};
  double werr = 0.0, mass_excess = -INFINITY;
  for (const auto& th : synthetic) {
    const CandidateH h(transform_measure(s, th, grid));
    const auto rec = recover_measure(s, h, rg);
    for (std::size_t j = 0; j < rg.size(); ++j) {
      double w = 0.0;
      for (std::size_t q = 0; q < th.rs.size(); ++q)
        if (std::abs(th.rs[q] - rg[j]) < 1e-9) w = th.weights[q];
      werr = std::max(werr, std::abs(rec.measure.weights[j] - w));
    }
    mass_excess = std::max(mass_excess, rec.phi0_mass - h.at(0.0));
  }
  out.push_back(bound("recover_measure weights (2 and 3 atoms)", werr, 1e-4));
  for (const auto& p : positive) {
    const auto rec = recover_measure(s, p.h, rg);
    mass_excess = std::max(mass_excess, rec.phi0_mass - p.h.at(0.0));
  }
  out.push_back(bound("sum w phi_0 - h(0)", mass_excess, 1e-6));

  const auto phi0 = RadialProfile::from_rule(
      [&](std::span<const double> r) { return s.spherical().real_row(0.0, r); }, DecayClass::gaussian);
  const auto k0 = krein_fit(s, phi0);
  double rest0 = 0.0;
  for (std::size_t i = 1; i < k0.mu1.size(); ++i) rest0 += k0.mu1[i];
  for (double w : k0.mu2) rest0 += w;
  out.push_back(bound("krein_fit phi_0 residual", k0.residual, 1e-5));
  out.push_back(flag("krein_fit phi_0: atom at lambda=0", std::abs(k0.mu1[0] - 1.0) <= 1e-5 && rest0 <= 1e-5,
                     "mu1(0) " + sci(k0.mu1[0]) + ", rest " + sci(rest0)));
  const auto one = RadialProfile::from_rule(
      [](std::span<const double> r) { return std::vector<double>(r.size(), 1.0); }, DecayClass::gaussian);
  const auto k1 = krein_fit(s, one);
  const auto top = std::max_element(k1.mu2.begin(), k1.mu2.end()) - k1.mu2.begin();
  double rest1 = k1.mu1_total;
  for (std::size_t i = 0; i < k1.mu2.size(); ++i)
    if (static_cast<std::ptrdiff_t>(i) != top) rest1 += k1.mu2[i];
  const bool at_irho = std::abs(k1.imaginary_lambdas[static_cast<std::size_t>(top)] - s.rho()) < 1e-12;
  out.push_back(flag("krein_fit 1: atom at i rho",
                     at_irho && std::abs(k1.mu2[static_cast<std::size_t>(top)] - 1.0) <= 1e-5 && rest1 <= 1e-5 &&
                         k1.residual <= 1e-5,
                     "weight " + sci(k1.mu2[static_cast<std::size_t>(top)]) + ", rest " + sci(rest1) + ", residual " +
                         sci(k1.residual)));

  std::vector<Named> certified = positive;
  certified.push_back({"closure sum", CandidateH(SpectralFunction::sample(
      grid, [&](double l) { return positive[1].h.at(l) + positive[2].h.at(l); }))});
  certified.push_back({"closure product", CandidateH(SpectralFunction::sample(
      grid, [&](double l) { return positive[1].h.at(l) * positive[2].h.at(l); }))});
  certified.push_back({"closure multiple", CandidateH(SpectralFunction::sample(
      grid, [&](double l) { return closure.factor * positive[1].h.at(l); }))});
  double worst_gap = -INFINITY;
  bool psd = true;
  for (const auto& c : certified) {
    const auto rep = pd_check(c.h, 0.5, 12);
    psd = psd && rep.psd;
    worst_gap = std::max(worst_gap, rep.threshold - rep.min_eigenvalue);
  }
  out.push_back(flag("pd_check d=0.5 N=12 on certified h", psd, "worst threshold - min eigenvalue " + sci(worst_gap)));
  return out;
}

std::vector<Check> Selftest::State::cross_space() {
  const Space& s = other();
  std::vector<Check> out;
  for (int id = 1; id <= 5; ++id)
    for (auto& c : single_space_criterion(s, id)) {
      c.name = "[" + std::to_string(id) + "] " + c.name;
      out.push_back(std::move(c));
    }
  return out;
}

// ---------------------------------------------------------------- public

bool CriterionResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Selftest::Selftest(SelftestOptions options) : state_(std::make_unique<State>()) { state_->options = std::move(options); }
Selftest::~Selftest() = default;

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "eigen-equation suite";
    case 2: return "special values";
    case 3: return "estimate brackets";
    case 4: return "c-function gate";
    case 5: return "transform round-trip";
    case 6: return "Abel factorization";
    case 7: return "heat kernel and delta-sequence";
    case 8: return "kernel suite";
    case 9: return "odot algebra";
    case 10: return "Bochner suite";
    case 11: return "cross-space regression (4,3)";
    case 12: return "determinism";
    default: return "unknown";
  }
}

CriterionResult Selftest::run(int id) {
  if (id < kFirst || id > kLast) throw DomainError("selftest: no criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  State& st = *state_;
  switch (id) {
    case 6: r.checks = st.abel(); break;
    case 7: r.checks = st.heat(); break;
    case 8: r.checks = st.kernel_suite(); break;
    case 9: r.checks = st.odot_algebra(); break;
    case 10: r.checks = st.bochner(); break;
    case 11: r.checks = st.cross_space(); break;
    default: r.checks = single_space_criterion(st.main(), id); break;
  }
  return r;
}

std::string format_line(const CriterionResult& result) {
  return "criterion " + std::to_string(result.id) + ": " + (result.pass() ? "PASS" : "FAIL") + " " + result.title;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os << "drspher selftest\n";
  int passed = 0;
  for (const auto& r : results) {
    os << format_line(r) << '\n';
    for (const auto& c : r.checks) {
      os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
      if (!c.detail.empty()) os << ": " << c.detail;
      os << '\n';
    }
    if (r.pass()) ++passed;
  }
  os << "summary: " << passed << "/" << results.size() << " criteria passed\n";
  return os.str();
}

}  // namespace drspher
