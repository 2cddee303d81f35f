#pragma once

#include <span>
#include <vector>

#include "drspher/transform.hpp"

namespace drspher {

/// Symmetric lambda grid for spectral synthesis of exp(-t lambda^2):
/// step min(1/16, 0.7 / sqrt(2 t)), half-width sqrt(45 / t) + 1.
UniformGrid heat_lambda_grid(double t);

/// p_t(r) = c0 int exp(-t (lambda^2 + rho^2)) phi_lambda(r) |c(lambda)|^-2 dlambda.
///
/// `unscaled` holds exp(t rho^2) p_t so that large t does not underflow;
/// `profile` is p_t itself.
struct HeatKernel {
  double t = 0.0;
  UniformGrid grid;
  RadialProfile unscaled;
  RadialProfile profile;
  double log_factor = 0.0;  // -t rho^2
};

HeatKernel heat_kernel(const Space& space, double t, std::span<const double> rs = {});

/// exp(-t (lambda^2 + rho^2)) on a grid.
SpectralFunction heat_multiplier(const Space& space, double t, const UniformGrid& grid);

/// gamma_n(lambda) = exp(-n lambda^2) / Z_n with Z_n = int exp(-n lambda^2)
/// |c(lambda)|^-2 dlambda, i.e. exp(-n (lambda^2 + rho^2)) divided by the
/// heat-kernel value at the origin taken without the c0 factor. Z_n comes
/// from the same trapezoid rule that synthesizes p_n(0).
struct DeltaSequenceTerm {
  int n = 0;
  SpectralFunction gamma;
  double log_pn_e = 0.0;       // log of exp(-n rho^2) Z_n
  double z = 0.0;              // Z_n
  double normalization = 0.0;  // int gamma_n |c|^-2 by adaptive Gauss-Kronrod
};

/// Throws DomainError for n < 1 or n > 500.
DeltaSequenceTerm gamma_term(const Space& space, int n, const UniformGrid& grid);
DeltaSequenceTerm gamma_term(const Space& space, int n);

/// int_{|lambda| >= beta} gamma_n |c|^-2 dlambda.
double gamma_tail(const Space& space, int n, double beta);

struct TailEnvelope {
  std::vector<int> ns;
  std::vector<double> tails;
  std::vector<double> bounds;  // A exp(-n (beta^2 - alpha^2)), A fitted at ns.front()
  bool decreasing = false;
  bool bounded = false;
};

TailEnvelope gamma_tail_envelope(const Space& space, std::span<const int> ns, double beta = 1.0,
                                 double alpha = 0.5);

struct Phi0Limit {
  std::vector<int> ns;
  std::vector<double> deviations;  // max_r |p_n(r)/p_n(0) - phi_0(r)|
  bool decreasing = false;
  double last() const { return deviations.empty() ? 0.0 : deviations.back(); }
};

/// Concentration of p_n / p_n(0) onto phi_0 along increasing n.
Phi0Limit phi0_limit_check(const Space& space, std::span<const int> ns, std::span<const double> rs,
                           double noise = 1e-6);

}  // namespace drspher
