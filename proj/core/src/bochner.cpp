#include "drspher/bochner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "drspher/error.hpp"
#include "drspher/nnls.hpp"
#include "drspher/spline.hpp"

namespace drspher {

namespace {

// Uniform in [lo, hi) from the raw engine output; independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::string fmt(const char* name, std::initializer_list<double> xs) {
  std::ostringstream os;
  os.precision(6);
  os << name << '(';
  bool first = true;
  for (double x : xs) {
    if (!first) os << ',';
    os << x;
    first = false;
  }
  os << ')';
  return os.str();
}

double weighted_sum(const Space& space, const UniformGrid& grid, const std::vector<double>& f, int stride) {
  const int n = grid.count;
  const double h = grid.step() * stride;
  const auto ls = grid.points();
  double s = 0.0;
  for (int i = 0; i < n; i += stride) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    s += w * f[static_cast<std::size_t>(i)] * space.spectral_density(ls[static_cast<std::size_t>(i)]);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- candidates

CandidateH::CandidateH(SpectralFunction values) : h(std::move(values)) {
  h.validate();
  if (!h.even) throw DomainError("candidate h must be even");
  bound = h.sup();
}

double CandidateH::at(double lambda) const {
  const auto ls = h.grid.points();
  const double a = std::abs(lambda);
  if (a > h.grid.max + 1e-12) throw DomainError("candidate h: lambda outside the sampled range");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] >= 0.0) {
      x.push_back(ls[i]);
      y.push_back(h.values[i]);
    }
  return CubicSpline(x, y, 0.0)(std::min(a, x.back()));
}

CandidateH CandidateH::on_grid(const UniformGrid& grid) const {
  if (grid == h.grid) return *this;
  grid.validate("candidate grid");
  if (!grid.is_symmetric()) throw DomainError("candidate h: target grid must be symmetric");
  if (grid.max > h.grid.max + 1e-12)
    throw DomainError("grid coverage insufficient: h is sampled on |lambda| <= " + std::to_string(h.grid.max) +
                      " but " + std::to_string(grid.max) + " is required");
  const auto ls = h.grid.points();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] >= 0.0) {
      x.push_back(ls[i]);
      y.push_back(h.values[i]);
    }
  const CubicSpline spline(x, y, 0.0);
  return CandidateH(SpectralFunction::sample(grid, [&](double l) { return spline(std::min(std::abs(l), x.back())); }));
}

// ---------------------------------------------------------------- family

TestFamily default_test_family(const Space& space, const UniformGrid& grid, std::uint64_t seed) {
  const double rho = space.rho();
  TestFamily fam;
  std::ostringstream desc;
  desc << "default-64(seed=" << seed << ")";
  fam.description = desc.str();

  for (int q = 0; q < 16; ++q) {
    const double a = 0.6 * std::pow(4.0 / 0.6, q / 15.0);
    fam.members.push_back({fmt("gauss", {a}), SpectralFunction::sample(grid, [=](double l) {
                             return std::exp(-a * (l * l + rho * rho));
                           }), std::nullopt});
  }
  for (double s : {1.0, 2.0, 3.0})
    for (double a : {2.0, 3.0})
      for (double c : {0.5, 1.0, 1.5, 2.0})
        fam.members.push_back({fmt("shift", {s, a, c}), SpectralFunction::sample(grid, [=](double l) {
                                 return std::exp(-a * (l - s) * (l - s)) + std::exp(-a * (l + s) * (l + s)) -
                                        c * std::exp(-a * l * l);
                               }), std::nullopt});
  std::mt19937_64 rng(seed);
  for (int q = 0; q < 24; ++q) {
    double coef[4], centre[4], width[4];
    for (int b = 0; b < 4; ++b) {
      coef[b] = uniform(rng, -1.0, 1.0);
      centre[b] = uniform(rng, 0.0, 3.0);
      width[b] = uniform(rng, 2.0, 4.0);
    }
    auto f = [=](double l) {
      double v = 0.0;
      for (int b = 0; b < 4; ++b)
        v += coef[b] * (std::exp(-width[b] * (l - centre[b]) * (l - centre[b])) +
                        std::exp(-width[b] * (l + centre[b]) * (l + centre[b])));
      return v;
    };
    fam.members.push_back({fmt("random", {static_cast<double>(q)}), SpectralFunction::sample(grid, f), std::nullopt});
  }
  return fam;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------- certify

CertificationReport certify(const Space& space, const KernelTensor& K, const CandidateH& h_in, const TestFamily& family,
                            const CertifyOptions& options) {
  const auto& grid = K.grid();
  if ((grid.count - 1) % 2 != 0) throw DomainError("certify: kernel grid needs an even number of intervals");
  const CandidateH h = h_in.on_grid(grid);
  const double c0 = space.c0();

  CertificationReport rep;
  rep.family = family.description;
  rep.tolerance = options.tolerance;
  rep.min_value = std::numeric_limits<double>::infinity();
  bool violation = false, decisive = false;
  const double density_mass = l1_norm(space, SpectralFunction::sample(grid, [](double) { return 1.0; }));
  for (const auto& g : family.members) {
    const auto q = odot_star(space, K, g.re, g.im ? &*g.im : nullptr);
    std::vector<double> hq(q.values.size());
    for (std::size_t i = 0; i < hq.size(); ++i) hq[i] = h.h.values[i] * q.values[i];
    const double full = weighted_sum(space, grid, hq, 1);
    const double half = weighted_sum(space, grid, hq, 2);
    double norm = l1_norm(space, g.re);
    if (g.im) norm = std::hypot(norm, l1_norm(space, *g.im));
    const double scale = std::max(h.bound, 1e-300) * c0 * norm * norm;
    // kernel error propagated through both contractions and the pairing
    const double kern = K.max_error() * c0 * c0 * norm * norm * h.bound * density_mass;
    const double err = (std::abs(full - half) + kern) / scale;
    Witness w{g.label, full, full / scale};
    rep.values.push_back(w);
    rep.max_error = std::max(rep.max_error, err);
    if (w.normalized < rep.min_value) {
      rep.min_value = w.normalized;
      rep.min_label = g.label;
    }
    if (w.normalized < -options.tolerance) {
      violation = true;
      if (-w.normalized > err) {
        decisive = true;
        rep.witnesses.push_back(w);
      }
    }
  }
  if (family.members.empty()) rep.min_value = 0.0;
  rep.verdict = !violation ? Verdict::pass : (decisive ? Verdict::fail : Verdict::inconclusive);
  return rep;
}

// ---------------------------------------------------------------- recovery

RecoveredMeasure recover_measure(const Space& space, const CandidateH& h, std::span<const double> r_grid,
                                 const RecoverOptions& options) {
  if (r_grid.empty()) throw DomainError("recover_measure: empty r grid");
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    if (!(r_grid[j] >= 0.0)) throw DomainError("recover_measure: radii must be >= 0");
    if (j > 0 && !(r_grid[j] > r_grid[j - 1])) throw DomainError("recover_measure: radii must be ascending");
  }
  const auto& grid = h.h.grid;
  const auto ls = grid.points();
  const auto tw = trapezoid_weights(grid);
  std::vector<double> lam, target, weight;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] > 0.0) {
      lam.push_back(ls[i]);
      target.push_back(h.h.values[i]);
      weight.push_back(std::sqrt(tw[i] * space.spectral_density(ls[i])));
    }
  const double h0 = h.at(0.0);
  const double anchor = *std::max_element(weight.begin(), weight.end());

  const Eigen::Index rows = static_cast<Eigen::Index>(lam.size()) + 1;
  const Eigen::Index cols = static_cast<Eigen::Index>(r_grid.size());
  Eigen::MatrixXd A(rows, cols), Phi(rows, cols);
  Eigen::VectorXd b(rows), raw(rows);
  const auto phi0 = space.spherical().real_row(0.0, r_grid);
  for (Eigen::Index j = 0; j < cols; ++j) {
    Phi(0, j) = phi0[static_cast<std::size_t>(j)];
    A(0, j) = anchor * Phi(0, j);
  }
  b(0) = anchor * h0;
  raw(0) = h0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const auto row = space.spherical().real_row(lam[i], r_grid);
    const Eigen::Index r = static_cast<Eigen::Index>(i) + 1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      Phi(r, j) = row[static_cast<std::size_t>(j)];
      A(r, j) = weight[i] * Phi(r, j);
    }
    b(r) = weight[i] * target[i];
    raw(r) = target[i];
  }
  NnlsOptions nopt;
  nopt.damping = options.damping;
  const auto sol = nnls(A, b, nopt);
  if (!sol.converged) throw NumericalError("recover_measure: NNLS did not converge");

  RecoveredMeasure out;
  Eigen::VectorXd x = sol.x;
  double mass = Phi.row(0).dot(x);
  if (mass > h0 && mass > 0.0) {
    x *= h0 / mass;
    mass = h0;
    out.mass_rescaled = true;
  }
  const Eigen::VectorXd fit = Phi * x;
  for (Eigen::Index i = 0; i < rows; ++i) out.residual = std::max(out.residual, std::abs(fit(i) - raw(i)));
  out.measure.rs.assign(r_grid.begin(), r_grid.end());
  out.measure.weights.assign(x.data(), x.data() + x.size());
  out.phi0_mass = mass;
  out.representable = out.residual <= options.tolerance * std::max(h.bound, 1e-300);
  return out;
}

// ---------------------------------------------------------------- Krein

KreinFit krein_fit(const Space& space, const RadialProfile& f, const KreinOptions& options) {
  options.r_grid.validate("krein r grid");
  options.real_lambdas.validate("krein lambda grid");
  if (options.r_grid.min < 0.0) throw DomainError("krein_fit: r grid must be nonnegative");
  if (options.real_lambdas.min < 0.0) throw DomainError("krein_fit: real lambda grid must be nonnegative");
  if (options.imaginary_count < 1) throw DomainError("krein_fit: need at least one imaginary node");
  const auto rs = options.r_grid.points();
  const auto fv = f.evaluate(rs);
  KreinFit out;
  out.f0 = f.at(0.0);
  out.real_lambdas = options.real_lambdas.points();
  const double rho = space.rho();
  for (int q = 1; q <= options.imaginary_count; ++q) out.imaginary_lambdas.push_back(rho * q / options.imaginary_count);

  const Eigen::Index R = static_cast<Eigen::Index>(rs.size());
  const Eigen::Index n1 = static_cast<Eigen::Index>(out.real_lambdas.size());
  const Eigen::Index n2 = static_cast<Eigen::Index>(out.imaginary_lambdas.size());
  Eigen::MatrixXd A(R, n1 + n2);
  Eigen::VectorXd b(R);
  for (Eigen::Index i = 0; i < R; ++i) b(i) = fv[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < n1; ++j) {
    const auto col = space.spherical().real_row(out.real_lambdas[static_cast<std::size_t>(j)], rs);
    for (Eigen::Index i = 0; i < R; ++i) A(i, j) = col[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index j = 0; j < n2; ++j) {
    const auto col = space.spherical().imaginary_row(out.imaginary_lambdas[static_cast<std::size_t>(j)], rs);
    for (Eigen::Index i = 0; i < R; ++i) A(i, n1 + j) = col[static_cast<std::size_t>(i)];
  }
  NnlsOptions nopt;
  nopt.damping = options.damping;
  const auto sol = nnls(A, b, nopt);
  if (!sol.converged) throw NumericalError("krein_fit: NNLS did not converge");
  out.mu1.assign(sol.x.data(), sol.x.data() + n1);
  out.mu2.assign(sol.x.data() + n1, sol.x.data() + n1 + n2);
  const Eigen::VectorXd fit = A * sol.x;
  for (Eigen::Index i = 0; i < R; ++i) out.residual = std::max(out.residual, std::abs(fit(i) - b(i)));
  for (double w : out.mu1) out.mu1_total += w;
  out.mass_ok = out.mu1_total <= out.f0 + options.mass_slack;
  out.positive_definite = out.residual <= options.tolerance * std::abs(out.f0);
  return out;
}

// ---------------------------------------------------------------- PSD checks

PdReport pd_check(const CandidateH& h, double spacing, int size, double max_interpolation_error) {
  if (!(spacing > 0.0)) throw DomainError("pd_check: spacing must be positive");
  if (size < 1) throw DomainError("pd_check: size must be >= 1");
  const double reach = spacing * (size - 1);
  if (reach > h.h.grid.max + 1e-12)
    throw DomainError("pd_check: lags up to " + std::to_string(reach) + " exceed the sampled range");
  const auto ls = h.h.grid.points();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] >= 0.0) {
      x.push_back(ls[i]);
      y.push_back(h.h.values[i]);
    }
  PdReport rep;
  rep.size = size;
  rep.spacing = spacing;
  // Lags on the sample knots take the samples; the spline only fills in between.
  const double step = h.h.grid.step();
  std::vector<double> lag(static_cast<std::size_t>(size));
  bool off_knot = false;
  for (int j = 0; j < size; ++j) {
    const double t = j * spacing;
    const double q = (t - x.front()) / step;
    const long idx = std::lround(q);
    if (std::abs(q - static_cast<double>(idx)) <= 1e-9 && idx >= 0 && idx < static_cast<long>(x.size())) {
      lag[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(idx)];
    } else {
      lag[static_cast<std::size_t>(j)] = std::nan("");
      off_knot = true;
    }
  }
  if (off_knot) {
    const CubicSpline spline(x, y, 0.0);
    rep.interpolation_error = spline.error_bound();
    if (rep.interpolation_error > max_interpolation_error * std::max(h.bound, 1e-300))
      throw NumericalError("pd_check: interpolation error bound " + std::to_string(rep.interpolation_error) +
                           " exceeded");
    for (int j = 0; j < size; ++j)
      if (std::isnan(lag[static_cast<std::size_t>(j)]))
        lag[static_cast<std::size_t>(j)] = spline(std::min(j * spacing, x.back()));
  }
  Eigen::MatrixXd M(size, size);
  for (int j = 0; j < size; ++j)
    for (int k = 0; k < size; ++k) M(j, k) = lag[static_cast<std::size_t>(std::abs(j - k))];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.threshold = -1e-8 * size * h.bound;
  rep.psd = rep.min_eigenvalue >= rep.threshold;
  return rep;
}

PdFourierReport pd_check_fourier(const Space& space, const CandidateH& h, const RadialMeasure& theta, double spacing,
                                 int size) {
  if (!(spacing > 0.0)) throw DomainError("pd_check: spacing must be positive");
  if (size < 1) throw DomainError("pd_check: size must be >= 1");
  // atoms of A(theta) live on |t| <= max r
  double rmax = 0.0;
  for (std::size_t i = 0; i < theta.rs.size(); ++i)
    if (theta.weights[i] > 0.0) rmax = std::max(rmax, theta.rs[i]);
  std::vector<double> ts;
  const double dt = 0.01;
  for (int j = 0; j * dt <= rmax + 1e-12; ++j) ts.push_back(j * dt);
  AbelMeasureOptions aopt;
  aopt.lambdas = h.h.grid;
  aopt.tolerance = 1e-4;
  const auto abel = abel_of_measure(space, theta, ts, aopt);

  PdFourierReport out;
  out.abel_residual = abel.residual;
  out.total_mass = abel.measure.total();
  std::vector<double> lags(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) lags[static_cast<std::size_t>(j)] = j * spacing;
  const auto hv = euclidean_fourier(abel.measure, lags);
  Eigen::MatrixXd M(size, size);
  for (int j = 0; j < size; ++j)
    for (int k = 0; k < size; ++k) M(j, k) = hv[static_cast<std::size_t>(std::abs(j - k))];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  out.report.size = size;
  out.report.spacing = spacing;
  out.report.min_eigenvalue = es.eigenvalues().minCoeff();
  out.report.threshold = -1e-8 * size * h.bound;
  out.report.psd = out.report.min_eigenvalue >= out.report.threshold;
  for (int j = 0; j < size; ++j)
    if (j * spacing <= h.h.grid.max)
      out.max_entry_gap = std::max(out.max_entry_gap, std::abs(hv[static_cast<std::size_t>(j)] - h.at(j * spacing)));
  return out;
}

bool ClosureReport::all_pass() const {
  return sum.verdict == Verdict::pass && product.verdict == Verdict::pass && scaled.verdict == Verdict::pass;
}

ClosureReport p0_closure_check(const Space& space, const KernelTensor& K, const CandidateH& h1_in,
                               const CandidateH& h2_in, const TestFamily& family, double factor) {
  if (!(factor > 0.0)) throw DomainError("p0_closure_check: factor must be positive");
  const CandidateH h1 = h1_in.on_grid(K.grid());
  const CandidateH h2 = h2_in.on_grid(K.grid());
  SpectralFunction s = h1.h, p = h1.h, c = h1.h;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    s.values[i] = h1.h.values[i] + h2.h.values[i];
    p.values[i] = h1.h.values[i] * h2.h.values[i];
    c.values[i] = factor * h1.h.values[i];
  }
  ClosureReport rep;
  rep.factor = factor;
  rep.sum = certify(space, K, CandidateH(s), family);
  rep.product = certify(space, K, CandidateH(p), family);
  rep.scaled = certify(space, K, CandidateH(c), family);
  return rep;
}

}  // namespace drspher
