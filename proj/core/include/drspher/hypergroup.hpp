#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "drspher/transform.hpp"

namespace drspher {

struct KernelOptions {
  double panel_width = 0.25;
  /// Radial truncation: (1 + R)^3 exp(-rho R) / rho below this.
  double tail = 1e-13;
};

/// Truncation radius for triple products of spherical functions.
double kernel_cutoff(const Space& space, const KernelOptions& options = {});

/// K(lambda, mu, nu) = int_0^oo phi_lambda phi_mu phi_nu A dr, with the
/// panel error estimate.
QuadResult kernel_K(const Space& space, double lambda, double mu, double nu, const KernelOptions& options = {});

/// K on grid^3, row-major [i][j][l]. Only |lambda| enters, so entries are
/// computed once per unordered triple of absolute values.
class KernelTensor {
 public:
  static KernelTensor build(const Space& space, const UniformGrid& grid, const KernelOptions& options = {});

  /// Loads from `dir` when a file with a matching key exists, otherwise
  /// builds and stores it. `hit` reports which happened.
  static KernelTensor cached(const Space& space, const UniformGrid& grid, const std::filesystem::path& dir,
                             bool rebuild = false, bool* hit = nullptr);

  static KernelTensor load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// FNV-1a of (m, k, grid, density_scale).
  static std::uint64_t cache_key(const SpaceParams& params, const UniformGrid& grid);
  static std::filesystem::path cache_file(const std::filesystem::path& dir, const SpaceParams& params,
                                          const UniformGrid& grid);

  const UniformGrid& grid() const { return grid_; }
  int m() const { return m_; }
  int k() const { return k_; }
  double density_scale() const { return density_scale_; }
  /// Largest per-entry quadrature error estimate.
  double max_error() const { return max_error_; }

  double operator()(int i, int j, int l) const {
    const std::size_t n = static_cast<std::size_t>(grid_.count);
    return values_[(static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n + static_cast<std::size_t>(l)];
  }
  std::span<const double> values() const { return values_; }

  /// Checks that the tensor belongs to this space.
  void check_space(const SpaceParams& params) const;

 private:
  UniformGrid grid_;
  int m_ = 0;
  int k_ = 0;
  double density_scale_ = 0.0;
  double max_error_ = 0.0;
  std::vector<double> values_;
};

/// (A odot B)(nu) = c0^2 sum_ij A_i B_j K(lambda_i, lambda_j, nu) |c_i|^-2 |c_j|^-2 w_i w_j
/// with trapezoid weights on the tensor grid. A and B must live on that
/// grid, be even and carry at most `tail_tolerance` of their weighted mass
/// on the two outermost points per side.
SpectralFunction odot(const Space& space, const KernelTensor& K, const SpectralFunction& A, const SpectralFunction& B,
                      double tail_tolerance = 1e-10);

/// g odot g* for g = re + i im (even): re odot re + im odot im.
SpectralFunction odot_star(const Space& space, const KernelTensor& K, const SpectralFunction& re,
                           const SpectralFunction* im = nullptr);

/// int h A |c|^-2 dlambda on the shared grid.
double pairing(const Space& space, const SpectralFunction& h, const SpectralFunction& A);

/// int |A| |c|^-2 dlambda.
double l1_norm(const Space& space, const SpectralFunction& A);

}  // namespace drspher
