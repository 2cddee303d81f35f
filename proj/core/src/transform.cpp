#include "drspher/transform.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>

#include "drspher/error.hpp"
#include "drspher/nnls.hpp"
#include "drspher/spline.hpp"

namespace drspher {

namespace {

std::vector<std::size_t> ascending_order(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  return idx;
}

// Evaluates fn (which expects ascending radii) at arbitrary radii.
template <class Fn>
std::vector<double> eval_sorted(std::span<const double> rs, Fn&& fn) {
  if (std::is_sorted(rs.begin(), rs.end())) return fn(rs);
  const auto idx = ascending_order(rs);
  std::vector<double> sorted(rs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) sorted[i] = rs[idx[i]];
  const auto v = fn(std::span<const double>(sorted));
  std::vector<double> out(rs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = v[i];
  return out;
}

// Rows phi_{|lambda|}(rs) shared between mirrored grid points.
std::vector<double> spectral_values(const std::vector<double>& lambdas,
                                    const std::function<double(double)>& value_at_abs) {
  std::map<double, double> cache;
  std::vector<double> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double a = std::abs(lambdas[i]);
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, value_at_abs(a)).first;
    out[i] = it->second;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- profiles

RadialProfile RadialProfile::from_rule(BatchRule rule, DecayClass decay, double support) {
  RadialProfile p;
  p.rule = std::move(rule);
  p.decay = decay;
  p.support = support;
  return p;
}

RadialProfile RadialProfile::from_samples(std::vector<double> rs, std::vector<double> values, DecayClass decay) {
  RadialProfile p;
  p.rs = std::move(rs);
  p.values = std::move(values);
  p.decay = decay;
  p.validate();
  if (decay == DecayClass::compact) p.support = p.rs.back();
  return p;
}

void RadialProfile::validate() const {
  if (rule) return;
  if (rs.size() != values.size()) throw DomainError("radial profile: rs and values differ in length");
  if (rs.size() < 4) throw DomainError("radial profile: need at least 4 samples");
  if (rs.front() < 0.0) throw DomainError("radial profile: negative radius");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) throw DomainError("radial profile: radii must be strictly ascending");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("radial profile: non-finite value");
}

std::vector<double> RadialProfile::evaluate(std::span<const double> at_rs) const {
  if (rule) return eval_sorted(at_rs, rule);
  validate();
  std::optional<double> slope;
  if (rs.front() == 0.0) slope = 0.0;
  const CubicSpline spline(rs, values, slope);
  std::vector<double> out(at_rs.size());
  for (std::size_t i = 0; i < at_rs.size(); ++i) {
    const double r = at_rs[i];
    if (r < 0.0) throw DomainError("radial profile: negative radius");
    if (r > rs.back())
      out[i] = 0.0;
    else if (r < rs.front())
      out[i] = values.front();
    else
      out[i] = spline(r);
  }
  return out;
}

double RadialProfile::at(double r) const {
  const double one[1] = {r};
  return evaluate(one)[0];
}

// ---------------------------------------------------------------- spectra

SpectralFunction SpectralFunction::sample(const UniformGrid& grid, const std::function<double(double)>& f,
                                          bool even) {
  grid.validate("spectral grid");
  SpectralFunction s;
  s.grid = grid;
  s.even = even;
  const auto ls = grid.points();
  s.values.resize(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) s.values[i] = f(ls[i]);
  return s;
}

double SpectralFunction::asymmetry() const {
  if (!grid.is_symmetric()) return 0.0;
  double a = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n / 2; ++i) a = std::max(a, std::abs(values[i] - values[n - 1 - i]));
  return a;
}

double SpectralFunction::sup() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

void SpectralFunction::validate() const {
  grid.validate("spectral grid");
  if (values.size() != static_cast<std::size_t>(grid.count))
    throw DomainError("spectral function: value count does not match the grid");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("spectral function: non-finite value");
  if (even) {
    if (!grid.is_symmetric()) throw DomainError("spectral function: even data needs a symmetric grid");
    if (asymmetry() > 1e-12 * std::max(1.0, sup())) throw DomainError("spectral function: not even");
  }
}

void RadialMeasure::validate() const {
  if (rs.size() != weights.size()) throw DomainError("radial measure: rs and weights differ in length");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!(rs[i] >= 0.0) || !std::isfinite(rs[i])) throw DomainError("radial measure: radius must be >= 0");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw DomainError("radial measure: weights must be nonnegative");
  }
}

double RadialMeasure::phi0_mass(const Space& space) const {
  validate();
  const auto phi0 = eval_sorted(rs, [&](std::span<const double> r) { return space.spherical().real_row(0.0, r); });
  double s = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) s += weights[i] * phi0[i];
  return s;
}

// ---------------------------------------------------------------- forward

double radial_cutoff(const Space& space, const RadialProfile& f, const TransformOptions& options,
                     bool phi0_weight) {
  if (f.decay == DecayClass::compact) {
    if (!std::isfinite(f.support) || f.support <= 0.0)
      throw DomainError("compact profile needs a positive finite support bound");
    return f.support;
  }
  std::vector<double> probe;
  for (double r = options.probe_step; r <= options.probe_max + 1e-12; r += options.probe_step) probe.push_back(r);
  const auto fv = f.evaluate(probe);
  std::vector<double> phi0(probe.size(), 1.0);
  if (phi0_weight) phi0 = space.spherical().real_row(0.0, probe);
  std::vector<double> env(probe.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    env[i] = std::abs(fv[i]) * phi0[i] * space.volume(probe[i]);
    if (!std::isfinite(env[i])) throw DomainError("radial profile: non-finite value at r = " + std::to_string(probe[i]));
  }
  // Scan outward against the running peak. Profiles computed by spectral
  // synthesis carry an absolute error of order eps phi_0(r) that A(r)
  // amplifies, so the envelope can bottom out and grow again; a deep
  // minimum followed by tenfold growth is taken as that noise floor.
  constexpr std::size_t kQuiet = 4;  // must stay below the cut this many probe steps
  double peak = 0.0;
  std::size_t low = 0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (env[i] >= peak) {
      peak = env[i];
      low = i;
    }
    if (peak == 0.0) continue;
    if (i + kQuiet < probe.size()) {
      bool quiet = true;
      for (std::size_t j = i; j <= i + kQuiet; ++j) quiet = quiet && env[j] < options.envelope_cut * peak;
      if (quiet) return probe[i];
    }
    if (env[i] < env[low]) low = i;
    if (env[low] < options.noise_floor * peak && env[i] > 10.0 * env[low]) return probe[low];
  }
  if (peak == 0.0) return options.probe_step;
  throw TruncationError("radial profile does not decay: |f| phi_0 A still above " +
                        std::to_string(options.envelope_cut) + " of its peak at r = " +
                        std::to_string(options.probe_max));
}

SpectralResult spherical_transform(const Space& space, const RadialProfile& f, const UniformGrid& lambdas,
                                   const TransformOptions& options) {
  lambdas.validate("transform lambda grid");
  const double R = radial_cutoff(space, f, options);
  const PanelRule rule = PanelRule::with_width(0.0, R, options.panel_width);
  const auto fv = f.evaluate(rule.nodes);
  std::vector<double> base(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) base[i] = fv[i] * space.volume(rule.nodes[i]);

  SpectralResult out;
  out.cutoff = R;
  out.spectrum.grid = lambdas;
  out.spectrum.even = lambdas.is_symmetric();
  std::vector<double> integrand(rule.size());
  out.spectrum.values = spectral_values(lambdas.points(), [&](double a) {
    const auto row = space.spherical().real_row(a, rule.nodes);
    for (std::size_t i = 0; i < rule.size(); ++i) integrand[i] = base[i] * row[i];
    const auto q = drspher::apply(rule, integrand);
    out.error_estimate = std::max(out.error_estimate, q.error);
    return q.value;
  });
  return out;
}

QuadResult radial_integral(const Space& space, const RadialProfile& f, const TransformOptions& options) {
  const double R = radial_cutoff(space, f, options, false);
  const PanelRule rule = PanelRule::with_width(0.0, R, options.panel_width);
  auto fv = f.evaluate(rule.nodes);
  for (std::size_t i = 0; i < rule.size(); ++i) fv[i] *= space.volume(rule.nodes[i]);
  return drspher::apply(rule, fv);
}

// ---------------------------------------------------------------- inverse

RadialProfile inverse_transform(const Space& space, const SpectralFunction& F, std::span<const double> rs,
                                double tail_tolerance) {
  F.validate();
  if (!F.grid.is_symmetric() || F.grid.count % 2 == 0)
    throw DomainError("inverse transform: needs a symmetric grid with an odd number of points");
  const auto ls = F.grid.points();
  const auto w = trapezoid_weights(F.grid);
  const std::size_t mid = ls.size() / 2;

  // Fold the even integrand onto lambda >= 0.
  std::vector<double> lam, coef;
  double total = 0.0;
  for (std::size_t i = mid; i < ls.size(); ++i) {
    const double c = (i == mid ? 1.0 : 2.0) * w[i] * F.values[i] * space.spectral_density(ls[i]);
    lam.push_back(ls[i]);
    coef.push_back(c);
    total += std::abs(c);
  }
  const std::size_t m = coef.size();
  const double edge = std::abs(coef[m - 1]) + (m >= 2 ? std::abs(coef[m - 2]) : 0.0);
  if (total > 0.0 && edge > tail_tolerance * total)
    throw TruncationError("inverse transform: spectral mass at the grid edge is " + std::to_string(edge / total) +
                          " of the total; widen the lambda grid");

  // Drop coefficients that cannot affect the result in double precision.
  std::vector<double> keep_l, keep_c;
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(coef[j]) > 1e-20 * total) {
      keep_l.push_back(lam[j]);
      keep_c.push_back(coef[j] * space.c0());
    }

  const auto ev = std::make_shared<SphericalEvaluator>(space.spherical());
  BatchRule rule = [ev, keep_l, keep_c](std::span<const double> r) {
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t j = 0; j < keep_l.size(); ++j) {
      const auto row = ev->real_row(keep_l[j], r);
      for (std::size_t i = 0; i < r.size(); ++i) out[i] += keep_c[j] * row[i];
    }
    return out;
  };
  RadialProfile p = RadialProfile::from_rule(rule, DecayClass::gaussian);
  p.rs.assign(rs.begin(), rs.end());
  p.values = p.evaluate(rs);
  return p;
}

SpectralFunction transform_measure(const Space& space, const RadialMeasure& theta, const UniformGrid& lambdas) {
  theta.validate();
  lambdas.validate("transform lambda grid");
  const auto idx = ascending_order(theta.rs);
  std::vector<double> rs(idx.size()), ws(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    rs[i] = theta.rs[idx[i]];
    ws[i] = theta.weights[idx[i]];
  }
  SpectralFunction out;
  out.grid = lambdas;
  out.even = lambdas.is_symmetric();
  out.values = spectral_values(lambdas.points(), [&](double a) {
    const auto row = space.spherical().real_row(a, rs);
    double s = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) s += ws[i] * row[i];
    return s;
  });
  return out;
}

// ---------------------------------------------------------------- Abel / Fourier

double EvenMeasure::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

EvenSamples inverse_euclidean_fourier(const SpectralFunction& F, const UniformGrid& ts) {
  F.grid.validate("spectral grid");
  ts.validate("t grid");
  const auto ls = F.grid.points();
  const auto w = trapezoid_weights(F.grid);
  EvenSamples out{ts, {}};
  for (double t : ts.points()) {
    double s = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) s += w[i] * F.values[i] * std::cos(ls[i] * t);
    out.values.push_back(s / (2.0 * std::numbers::pi));
  }
  return out;
}

SpectralFunction euclidean_fourier(const EvenSamples& g, const UniformGrid& lambdas) {
  g.grid.validate("t grid");
  lambdas.validate("lambda grid");
  if (g.values.size() != static_cast<std::size_t>(g.grid.count))
    throw DomainError("euclidean_fourier: value count does not match the grid");
  const bool half = g.grid.min == 0.0;
  if (!half && !g.grid.is_symmetric())
    throw DomainError("euclidean_fourier: t grid must be symmetric or start at 0");
  const double lmax = std::max(std::abs(lambdas.min), std::abs(lambdas.max));
  if (lmax * g.grid.step() >= std::numbers::pi)
    throw NumericalError("euclidean_fourier: lambda range aliases on this t grid (|lambda| dt >= pi)");
  const auto ts = g.grid.points();
  auto w = trapezoid_weights(g.grid);
  if (half)
    for (std::size_t i = 1; i < w.size(); ++i) w[i] *= 2.0;
  SpectralFunction out;
  out.grid = lambdas;
  out.even = lambdas.is_symmetric();
  for (double l : lambdas.points()) {
    double s = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) s += w[i] * g.values[i] * std::cos(l * ts[i]);
    out.values.push_back(s);
  }
  return out;
}

std::vector<double> euclidean_fourier(const EvenMeasure& mu, std::span<const double> lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.ts.size(); ++i) s += mu.masses[i] * std::cos(l * mu.ts[i]);
    out.push_back(s);
  }
  return out;
}

EvenSamples abel_transform(const Space& space, const RadialProfile& f, const UniformGrid& ts,
                           const AbelOptions& options) {
  const auto grid = UniformGrid::symmetric(options.lambda_max, options.lambda_count);
  const auto fhat = spherical_transform(space, f, grid).spectrum;
  const double peak = fhat.sup();
  const double edge = std::max(std::abs(fhat.values.front()), std::abs(fhat.values.back()));
  if (edge > options.tail_tolerance * peak)
    throw TruncationError("abel_transform: spectral transform not negligible at |lambda| = " +
                          std::to_string(options.lambda_max));
  return inverse_euclidean_fourier(fhat, ts);
}

AbelMeasureResult abel_of_measure(const Space& space, const RadialMeasure& theta, std::span<const double> ts,
                                  const AbelMeasureOptions& options) {
  if (ts.empty()) throw DomainError("abel_of_measure: empty t grid");
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (!(ts[j] >= 0.0)) throw DomainError("abel_of_measure: t grid must be nonnegative");
    if (j > 0 && !(ts[j] > ts[j - 1])) throw DomainError("abel_of_measure: t grid must be ascending");
  }
  const auto data = transform_measure(space, theta, options.lambdas);
  const auto ls = options.lambdas.points();
  std::vector<double> lam, rhs;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] >= 0.0) {
      lam.push_back(ls[i]);
      rhs.push_back(data.values[i]);
    }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(lam.size()), static_cast<Eigen::Index>(ts.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(lam.size()));
  for (std::size_t i = 0; i < lam.size(); ++i) {
    b(static_cast<Eigen::Index>(i)) = rhs[i];
    for (std::size_t j = 0; j < ts.size(); ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::cos(lam[i] * ts[j]);
  }
  const auto sol = nnls(A, b);
  if (!sol.converged) throw NumericalError("abel_of_measure: NNLS did not converge");

  AbelMeasureResult out;
  const Eigen::VectorXd fit = A * sol.x;
  for (Eigen::Index i = 0; i < b.size(); ++i) out.residual = std::max(out.residual, std::abs(fit(i) - b(i)));
  if (out.residual > options.tolerance * std::max(1.0, std::abs(b(0))))
    throw NumericalError("abel_of_measure: residual " + std::to_string(out.residual) +
                         " above tolerance (t grid too coarse?)");

  // Symmetric atoms: mass at t_j > 0 split evenly between +-t_j.
  for (std::size_t j = ts.size(); j-- > 0;)
    if (ts[j] > 0.0 && sol.x(static_cast<Eigen::Index>(j)) > 0.0) {
      out.measure.ts.push_back(-ts[j]);
      out.measure.masses.push_back(0.5 * sol.x(static_cast<Eigen::Index>(j)));
    }
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double x = sol.x(static_cast<Eigen::Index>(j));
    if (x <= 0.0) continue;
    out.measure.ts.push_back(ts[j]);
    out.measure.masses.push_back(ts[j] > 0.0 ? 0.5 * x : x);
  }
  return out;
}

}  // namespace drspher
