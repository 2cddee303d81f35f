#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace drspher {

/// Equispaced grid min, min + h, ..., max with `count` points.
struct UniformGrid {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  static UniformGrid symmetric(double half_width, int count) { return {-half_width, half_width, count}; }

  double step() const { return (max - min) / (count - 1); }
  double at(int i) const;
  std::vector<double> points() const;
  bool is_symmetric() const;
  void validate(const char* what) const;
  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

/// Trapezoid weights for a uniform grid.
std::vector<double> trapezoid_weights(const UniformGrid& g);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) by interval bisection.
/// Stops when the summed error estimate is below max(abs_tol, rel_tol |I|);
/// throws NumericalError when the interval budget is exhausted.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-14, double rel_tol = 1e-12,
                              int max_intervals = 4000);

/// Fixed composite 15-point Kronrod rule on equal panels of [a, b], carrying
/// the embedded 7-point Gauss weights so that a per-panel error estimate is
/// available at no extra function evaluations. Nodes are stored panel by
/// panel, 15 per panel, ascending.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> kronrod;
  std::vector<double> gauss;  // zero on the 8 Kronrod-only nodes
  int panels = 0;

  static constexpr int kPerPanel = 15;

  static PanelRule make(double a, double b, int panels);
  /// Panels of width at most `width` covering [a, b].
  static PanelRule with_width(double a, double b, double width);

  std::size_t size() const { return nodes.size(); }
};

/// Kronrod sum and the summed |Kronrod - Gauss| panel discrepancies of the
/// sampled integrand values `f` (one per rule node).
QuadResult apply(const PanelRule& rule, std::span<const double> f);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace drspher
