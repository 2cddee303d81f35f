#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "drspher/quadrature.hpp"
#include "drspher/space.hpp"

namespace drspher {

enum class DecayClass { compact, gaussian, schwartz_p2 };

/// Evaluates a profile at an ascending batch of radii.
using BatchRule = std::function<std::vector<double>(std::span<const double>)>;

/// Radial function f(r), r >= 0, either given by a rule or by samples
/// (interpolated by a cubic spline clamped to zero slope at r = 0 and taken
/// as zero beyond the last sample).
struct RadialProfile {
  std::vector<double> rs;
  std::vector<double> values;
  DecayClass decay = DecayClass::gaussian;
  double support = std::numeric_limits<double>::infinity();
  BatchRule rule;

  static RadialProfile from_rule(BatchRule rule, DecayClass decay,
                                 double support = std::numeric_limits<double>::infinity());
  static RadialProfile from_samples(std::vector<double> rs, std::vector<double> values,
                                    DecayClass decay = DecayClass::compact);

  std::vector<double> evaluate(std::span<const double> rs) const;
  double at(double r) const;
  void validate() const;
};

/// Real function of lambda on a uniform grid.
struct SpectralFunction {
  UniformGrid grid;
  std::vector<double> values;
  bool even = true;

  static SpectralFunction sample(const UniformGrid& grid, const std::function<double(double)>& f,
                                 bool even = true);
  std::vector<double> lambdas() const { return grid.points(); }
  /// max |F(lambda) - F(-lambda)| over mirrored grid pairs.
  double asymmetry() const;
  double sup() const;
  void validate() const;
};

/// Atoms w_i >= 0 at radii r_i.
struct RadialMeasure {
  std::vector<double> rs;
  std::vector<double> weights;

  void validate() const;
  /// sum_i w_i phi_0(r_i).
  double phi0_mass(const Space& space) const;
};

struct TransformOptions {
  double panel_width = 0.25;
  /// Truncate where |f| phi_0 A falls below this fraction of its peak.
  double envelope_cut = 1e-12;
  double probe_step = 0.25;
  double probe_max = 80.0;
  /// Accept a noise-floor minimum of the envelope below this fraction of the peak.
  double noise_floor = 1e-8;
};

struct SpectralResult {
  SpectralFunction spectrum;
  double error_estimate = 0.0;  // max over lambda of the panel |Kronrod - Gauss| sum
  double cutoff = 0.0;          // radial truncation point
};

/// Radius beyond which |f| phi_0 A (or |f| A without the phi_0 weight) is
/// negligible. Compact profiles return their support bound.
double radial_cutoff(const Space& space, const RadialProfile& f, const TransformOptions& options = {},
                     bool phi0_weight = true);

/// f^(lambda) = int_0^oo f(r) phi_lambda(r) A(r) dr on the grid.
SpectralResult spherical_transform(const Space& space, const RadialProfile& f, const UniformGrid& lambdas,
                                   const TransformOptions& options = {});

/// int_0^oo f(r) A(r) dr, i.e. f^(i rho).
QuadResult radial_integral(const Space& space, const RadialProfile& f, const TransformOptions& options = {});

/// f(r) = c0 int F(lambda) phi_lambda(r) |c(lambda)|^-2 dlambda by the
/// trapezoid rule on F's grid (symmetric, odd count). The returned profile
/// holds samples at `rs` and a rule for evaluating anywhere else. Throws
/// TruncationError when the two outermost grid points on either side carry
/// more than `tail_tolerance` of the total absolute mass.
RadialProfile inverse_transform(const Space& space, const SpectralFunction& F, std::span<const double> rs,
                                double tail_tolerance = 1e-10);

/// theta^(lambda) = sum_i w_i phi_lambda(r_i).
SpectralFunction transform_measure(const Space& space, const RadialMeasure& theta, const UniformGrid& lambdas);

/// Samples of an even function of t on a uniform grid.
struct EvenSamples {
  UniformGrid grid;
  std::vector<double> values;
};

/// Finite even measure on the line as atoms (ascending t).
struct EvenMeasure {
  std::vector<double> ts;
  std::vector<double> masses;
  double total() const;
};

struct AbelOptions {
  double lambda_max = 10.0;
  int lambda_count = 321;  // symmetric grid, step 1/16
  double tail_tolerance = 1e-12;
};

/// Abel transform as the inverse Euclidean Fourier transform of f^:
/// Af(s) = (1/2 pi) int f^(lambda) cos(lambda s) dlambda.
EvenSamples abel_transform(const Space& space, const RadialProfile& f, const UniformGrid& ts,
                           const AbelOptions& options = {});

struct AbelMeasureOptions {
  UniformGrid lambdas = UniformGrid::symmetric(8.0, 257);
  double tolerance = 1e-6;
};

struct AbelMeasureResult {
  EvenMeasure measure;
  double residual = 0.0;  // max |Fourier(measure) - theta^| on the lambda grid
};

/// Nonnegative even measure on the t-line whose Fourier transform matches
/// theta^, found by NNLS over atoms at +-t_j (t_j >= 0 ascending, t_0 = 0).
/// Throws NumericalError when the residual exceeds the tolerance.
AbelMeasureResult abel_of_measure(const Space& space, const RadialMeasure& theta, std::span<const double> ts,
                                  const AbelMeasureOptions& options = {});

/// g^(lambda) = int e^(-i lambda t) g(t) dt for even g (trapezoid on g's grid).
/// Throws NumericalError when max |lambda| * dt >= pi (aliasing).
SpectralFunction euclidean_fourier(const EvenSamples& g, const UniformGrid& lambdas);
std::vector<double> euclidean_fourier(const EvenMeasure& mu, std::span<const double> lambdas);

/// g(t) = (1/2 pi) int e^(i lambda t) F(lambda) dlambda.
EvenSamples inverse_euclidean_fourier(const SpectralFunction& F, const UniformGrid& ts);

}  // namespace drspher
