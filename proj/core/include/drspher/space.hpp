#pragma once

#include "drspher/params.hpp"
#include "drspher/plancherel.hpp"
#include "drspher/quadrature.hpp"
#include "drspher/spherical.hpp"

namespace drspher {

/// Geometry bundle passed to every transform: parameters, spherical-function
/// evaluator and Plancherel data for one (m, k). Immutable; cheap to copy.
class Space {
 public:
  explicit Space(const SpaceParams& params, SphericalOptions options = {});

  const SpaceParams& params() const { return params_; }
  const SphericalEvaluator& spherical() const { return spherical_; }
  const Plancherel& plancherel() const { return plancherel_; }

  double rho() const { return params_.rho_value(); }
  double c0() const { return plancherel_.c0(); }
  /// Radial volume density A(r).
  double volume(double r) const { return density(params_, r); }
  /// Plancherel density |c(lambda)|^-2.
  double spectral_density(double lambda) const { return plancherel_.density(lambda); }

 private:
  SpaceParams params_;
  SphericalEvaluator spherical_;
  Plancherel plancherel_;
};

struct CalibrationOptions {
  double gaussian_t = 1.0;
  UniformGrid grid = UniformGrid::symmetric(8.0, 129);
  double tolerance = 1e-8;
  int max_iterations = 20;
};

struct Calibration {
  SpaceParams params;       // with the solved density_scale
  double factor = 1.0;      // solved scale / provisional scale
  double roundtrip_error = 0.0;  // sup |fwd(inv(G)) - G| / sup |G|
  int iterations = 0;
};

/// Fixes density_scale so that the forward spherical transform inverts
/// inverse_transform() (which carries the c0 factor) on the Gaussian
/// G(lambda) = exp(-t (lambda^2 + rho^2)). The forward transform is linear
/// in the scale, so the secant iteration converges in one or two steps.
/// Throws NumericalError when the round trip misses the tolerance.
Calibration calibrate(const SpaceParams& provisional, const CalibrationOptions& options = {});

/// The scale implied by the Jacobi-transform Plancherel theorem,
/// 2^(m+2k) / (4 pi c0). Recorded for comparison; calibrate() does not use it.
double jacobi_density_scale(int m, int k);

/// derive_params + calibrate.
Space calibrated_space(int m, int k, SphericalOptions options = {});

}  // namespace drspher
