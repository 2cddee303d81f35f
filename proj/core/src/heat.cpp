#include "drspher/heat.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "drspher/error.hpp"

namespace drspher {

namespace {

constexpr int kMaxN = 500;

// Half-width beyond which exp(-t lambda^2) times polynomial growth is below
// double precision.
double heat_half_width(double t) { return std::sqrt(45.0 / t) + 1.0; }

RadialProfile scaled(const RadialProfile& p, double factor) {
  auto inner = p.rule;
  RadialProfile out = RadialProfile::from_rule(
      [inner, factor](std::span<const double> rs) {
        auto v = inner(rs);
        for (double& x : v) x *= factor;
        return v;
      },
      p.decay, p.support);
  out.rs = p.rs;
  out.values = p.values;
  for (double& x : out.values) x *= factor;
  return out;
}

double z_adaptive(const Space& space, int n) {
  const auto q = integrate_adaptive(
      [&](double l) { return std::exp(-n * l * l) * space.spectral_density(l); }, 0.0, heat_half_width(n), 1e-300,
      1e-13);
  return 2.0 * q.value;
}

}  // namespace

UniformGrid heat_lambda_grid(double t) {
  if (!(t > 0.0)) throw DomainError("heat kernel: t must be positive");
  const double step = std::min(1.0 / 16.0, 0.7 / std::sqrt(2.0 * t));
  const int half = static_cast<int>(std::ceil(heat_half_width(t) / step));
  return UniformGrid::symmetric(half * step, 2 * half + 1);
}

SpectralFunction heat_multiplier(const Space& space, double t, const UniformGrid& grid) {
  if (!(t > 0.0)) throw DomainError("heat multiplier: t must be positive");
  const double rho = space.rho();
  return SpectralFunction::sample(grid, [&](double l) { return std::exp(-t * (l * l + rho * rho)); });
}

HeatKernel heat_kernel(const Space& space, double t, std::span<const double> rs) {
  HeatKernel hk;
  hk.t = t;
  hk.grid = heat_lambda_grid(t);
  hk.log_factor = -t * space.rho() * space.rho();
  const auto F = SpectralFunction::sample(hk.grid, [&](double l) { return std::exp(-t * l * l); });
  hk.unscaled = inverse_transform(space, F, rs);
  hk.profile = scaled(hk.unscaled, std::exp(hk.log_factor));
  return hk;
}

DeltaSequenceTerm gamma_term(const Space& space, int n, const UniformGrid& grid) {
  if (n < 1) throw DomainError("gamma_term: n must be >= 1");
  if (n > kMaxN) throw DomainError("gamma_term: n > 500 underflows; rejected");
  DeltaSequenceTerm g;
  g.n = n;
  // Z_n by the trapezoid rule that synthesizes p_n at r = 0 (phi_lambda(0) = 1).
  const auto hg = heat_lambda_grid(n);
  const auto w = trapezoid_weights(hg);
  const auto ls = hg.points();
  double z = 0.0;
  for (std::size_t i = 0; i < ls.size(); ++i) z += w[i] * std::exp(-n * ls[i] * ls[i]) * space.spectral_density(ls[i]);
  if (!(z > 0.0)) throw NumericalError("gamma_term: normalization underflow");
  g.z = z;
  g.log_pn_e = std::log(z) - n * space.rho() * space.rho();
  g.gamma = SpectralFunction::sample(grid, [&](double l) { return std::exp(-n * l * l) / z; });
  g.normalization = z_adaptive(space, n) / z;
  return g;
}

DeltaSequenceTerm gamma_term(const Space& space, int n) {
  if (n < 1 || n > kMaxN) return gamma_term(space, n, UniformGrid::symmetric(1.0, 3));
  return gamma_term(space, n, heat_lambda_grid(n));
}

double gamma_tail(const Space& space, int n, double beta) {
  if (!(beta >= 0.0)) throw DomainError("gamma_tail: beta must be >= 0");
  const auto g = gamma_term(space, n, UniformGrid::symmetric(1.0, 3));
  const double hi = std::max(beta, 0.0) + heat_half_width(n);
  const auto q = integrate_adaptive(
      [&](double l) { return std::exp(-n * l * l) * space.spectral_density(l); }, beta, hi, 1e-300, 1e-12);
  return 2.0 * q.value / g.z;
}

TailEnvelope gamma_tail_envelope(const Space& space, std::span<const int> ns, double beta, double alpha) {
  if (ns.empty()) throw DomainError("gamma_tail_envelope: empty n list");
  if (!(beta > alpha && alpha > 0.0)) throw DomainError("gamma_tail_envelope: need beta > alpha > 0");
  TailEnvelope env;
  env.ns.assign(ns.begin(), ns.end());
  for (int n : ns) env.tails.push_back(gamma_tail(space, n, beta));
  const double gap = beta * beta - alpha * alpha;
  const double A = env.tails.front() / std::exp(-ns.front() * gap);
  env.decreasing = true;
  env.bounded = true;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    env.bounds.push_back(A * std::exp(-ns[i] * gap));
    if (i > 0 && !(env.tails[i] < env.tails[i - 1])) env.decreasing = false;
    // relative slack for the fitted point itself
    if (env.tails[i] > env.bounds[i] * (1.0 + 1e-12)) env.bounded = false;
  }
  return env;
}

Phi0Limit phi0_limit_check(const Space& space, std::span<const int> ns, std::span<const double> rs,
                           double noise) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw DomainError("phi0_limit_check: n list must be increasing");
  std::vector<double> sorted(rs.begin(), rs.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> with0 = sorted;
  if (with0.empty() || with0.front() != 0.0) with0.insert(with0.begin(), 0.0);
  const auto phi0 = space.spherical().real_row(0.0, with0);

  Phi0Limit out;
  out.ns.assign(ns.begin(), ns.end());
  for (int n : ns) {
    if (n < 1 || n > kMaxN) throw DomainError("phi0_limit_check: n must lie in [1, 500]");
    const auto hk = heat_kernel(space, n, with0);
    const auto& v = hk.unscaled.values;
    double dev = 0.0;
    for (std::size_t j = 0; j < with0.size(); ++j) dev = std::max(dev, std::abs(v[j] / v[0] - phi0[j]));
    out.deviations.push_back(dev);
  }
  out.decreasing = true;
  for (std::size_t i = 1; i < out.deviations.size(); ++i)
    if (out.deviations[i] > out.deviations[i - 1] + noise) out.decreasing = false;
  return out;
}

}  // namespace drspher
