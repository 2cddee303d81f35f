#pragma once

#include <optional>
#include <span>
#include <vector>

namespace drspher {

/// Interpolating cubic spline on strictly increasing knots. The left end is
/// clamped when a slope is given (radial profiles use slope 0 at r = 0),
/// otherwise natural; the right end is natural.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y, std::optional<double> left_slope = {});

  double operator()(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

  /// Interpolation error bound from the largest fourth divided difference,
  /// (3/128) h^4 max|f''''| with f'''' estimated from the data.
  double error_bound() const;

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace drspher
