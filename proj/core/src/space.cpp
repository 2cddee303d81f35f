#include "drspher/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drspher/error.hpp"
#include "drspher/transform.hpp"

namespace drspher {

Space::Space(const SpaceParams& params, SphericalOptions options)
    : params_(params), spherical_(params, options), plancherel_(params) {
  if (!(params.density_scale > 0.0)) throw DomainError("Space: density_scale must be positive");
}

double jacobi_density_scale(int m, int k) {
  return std::pow(2.0, m + 2 * k) / (4.0 * std::numbers::pi * inversion_constant(m, k));
}

Calibration calibrate(const SpaceParams& provisional, const CalibrationOptions& options) {
  options.grid.validate("calibration grid");
  if (!options.grid.is_symmetric()) throw DomainError("calibration grid must be symmetric");
  if (!(options.gaussian_t > 0.0)) throw DomainError("calibration: t must be positive");

  const double rho = provisional.rho_value();
  const double t = options.gaussian_t;
  const auto G = SpectralFunction::sample(options.grid, [&](double l) { return std::exp(-t * (l * l + rho * rho)); });
  const double g_sup = G.sup();

  // The inverse does not involve density_scale; compute it once.
  const Space base(provisional);
  const auto lambdas = options.grid.points();
  const RadialProfile f = inverse_transform(base, G, {});

  // Residual of the least-squares ratio fwd/G at scale s; zero at the solution.
  auto evaluate = [&](double s, double& err) {
    SpaceParams p = provisional;
    p.density_scale = s;
    const auto fwd = spherical_transform(Space(p), f, options.grid).spectrum.values;
    double num = 0.0, den = 0.0;
    err = 0.0;
    for (std::size_t i = 0; i < fwd.size(); ++i) {
      num += fwd[i] * G.values[i];
      den += G.values[i] * G.values[i];
      err = std::max(err, std::abs(fwd[i] - G.values[i]));
    }
    err /= g_sup;
    return num / den - 1.0;
  };

  Calibration out;
  double s0 = provisional.density_scale, e0 = 0.0;
  double g0 = evaluate(s0, e0);
  double s1 = s0 / (1.0 + g0), e1 = 0.0;
  double g1 = evaluate(s1, e1);
  int it = 2;
  while (std::abs(g1) > 1e-14 && it < options.max_iterations) {
    if (g1 == g0) break;
    const double s2 = s1 - g1 * (s1 - s0) / (g1 - g0);
    s0 = s1;
    g0 = g1;
    s1 = s2;
    g1 = evaluate(s1, e1);
    ++it;
  }
  if (!(e1 <= options.tolerance))
    throw NumericalError("calibration: round-trip error " + std::to_string(e1) + " above tolerance");

  out.params = provisional;
  out.params.density_scale = s1;
  out.factor = s1 / provisional.density_scale;
  out.roundtrip_error = e1;
  out.iterations = it;
  return out;
}

Space calibrated_space(int m, int k, SphericalOptions options) {
  return Space(calibrate(derive_params(m, k)).params, options);
}

}  // namespace drspher
