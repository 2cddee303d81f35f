#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drspher/hypergroup.hpp"
#include "drspher/transform.hpp"

namespace drspher {

/// Even bounded candidate h on a symmetric grid.
struct CandidateH {
  SpectralFunction h;
  double bound = 0.0;  // sup |h|

  explicit CandidateH(SpectralFunction values);
  /// Cubic-spline resampling onto `grid`; throws DomainError when `grid`
  /// is not covered by the data.
  CandidateH on_grid(const UniformGrid& grid) const;
  double at(double lambda) const;
};

struct TestFunction {
  std::string label;
  SpectralFunction re;
  std::optional<SpectralFunction> im;
};

struct TestFamily {
  std::string description;
  std::vector<TestFunction> members;
};

/// 64 even test functions on `grid`: 16 Gaussians exp(-a (lambda^2 + rho^2))
/// with a log-spaced in [0.6, 4], 24 shifted-Gaussian differences and 24
/// random signed sums of four even Gaussian bumps (seeded).
TestFamily default_test_family(const Space& space, const UniformGrid& grid, std::uint64_t seed = 0x5eed2024u);

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct Witness {
  std::string label;
  double value = 0.0;       // int h (g odot g*) |c|^-2
  double normalized = 0.0;  // value / scale
};

struct CertificationReport {
  std::string family;
  Verdict verdict = Verdict::pass;
  double min_value = 0.0;       // most negative normalized value
  std::string min_label;
  double tolerance = 1e-7;
  double max_error = 0.0;       // largest normalized quadrature error estimate
  std::vector<Witness> values;  // every member
  std::vector<Witness> witnesses;
};

struct CertifyOptions {
  double tolerance = 1e-7;
};

/// Screens int h (g odot g*) |c|^-2 dlambda >= 0 over the family. Values are
/// normalized by sup|h| c0 |g|_1^2, which bounds them. A value below
/// -tolerance is a violation; it is a witness for `fail` when it exceeds
/// its own error estimate (full grid vs every-other-point grid plus the
/// kernel error), otherwise the report is `inconclusive`.
CertificationReport certify(const Space& space, const KernelTensor& K, const CandidateH& h, const TestFamily& family,
                            const CertifyOptions& options = {});

struct RecoverOptions {
  /// NNLS damping relative to the largest squared column norm.
  double damping = 1e-10;
  /// Representable when the residual is below this fraction of sup|h|.
  double tolerance = 1e-4;
};

struct RecoveredMeasure {
  RadialMeasure measure;
  double residual = 0.0;  // max over the grid of |theta^ - h|
  double phi0_mass = 0.0;
  bool representable = false;
  bool mass_rescaled = false;
};

/// Nonnegative atoms on r_grid whose transform fits h in least squares
/// weighted by |c(lambda)|^-2 (plus an anchor row at lambda = 0). The
/// phi_0-mass is capped at h(0).
RecoveredMeasure recover_measure(const Space& space, const CandidateH& h, std::span<const double> r_grid,
                                 const RecoverOptions& options = {});

struct KreinOptions {
  UniformGrid r_grid{0.0, 10.0, 101};
  UniformGrid real_lambdas{0.0, 8.0, 129};
  int imaginary_count = 32;  // mu_k = k rho / count, k = 1..count
  double damping = 0.0;
  double tolerance = 1e-3;   // residual relative to f(0)
  double mass_slack = 1e-6;
};

struct KreinFit {
  std::vector<double> real_lambdas;
  std::vector<double> mu1;
  std::vector<double> imaginary_lambdas;  // mu with atoms at i mu
  std::vector<double> mu2;
  double residual = 0.0;  // sup over the r grid
  double f0 = 0.0;
  double mu1_total = 0.0;
  bool mass_ok = false;
  bool positive_definite = false;  // residual within tolerance
};

KreinFit krein_fit(const Space& space, const RadialProfile& f, const KreinOptions& options = {});

struct PdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // -1e-8 N sup|h|
  double interpolation_error = 0.0;
  int size = 0;
  double spacing = 0.0;
};

/// Toeplitz matrix h((j - k) d), j, k < N. Lags on sample points use the
/// samples; other lags use a cubic spline, and NumericalError is thrown
/// when its error bound exceeds max_interpolation_error * sup|h|.
PdReport pd_check(const CandidateH& h, double spacing, int size, double max_interpolation_error = 1e-6);

/// Same matrix through the Abel route: h = Fourier transform of the finite
/// nonnegative measure A(theta) for the recovered theta.
struct PdFourierReport {
  PdReport report;
  double max_entry_gap = 0.0;  // vs the interpolated matrix
  double abel_residual = 0.0;
  double total_mass = 0.0;
};
PdFourierReport pd_check_fourier(const Space& space, const CandidateH& h, const RadialMeasure& theta, double spacing,
                                 int size);

struct ClosureReport {
  CertificationReport sum;
  CertificationReport product;
  CertificationReport scaled;
  double factor = 2.5;
  bool all_pass() const;
};

ClosureReport p0_closure_check(const Space& space, const KernelTensor& K, const CandidateH& h1, const CandidateH& h2,
                               const TestFamily& family, double factor = 2.5);

}  // namespace drspher
