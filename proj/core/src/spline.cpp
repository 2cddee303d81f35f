#include "drspher/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drspher/error.hpp"

namespace drspher {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, std::optional<double> left_slope)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need >= 2 knots and matching values");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: knots must be strictly increasing");
  }
  // tridiagonal system for second derivatives (Thomas algorithm)
  std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
  if (left_slope) {
    const double h0 = x_[1] - x_[0];
    b[0] = h0 / 3.0;
    c[0] = h0 / 6.0;
    d[0] = (y_[1] - y_[0]) / h0 - *left_slope;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  m_.assign(n, 0.0);
  m_[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double x) const {
  if (x_.empty()) throw DomainError("CubicSpline: empty");
  if (x < x_.front() || x > x_.back()) throw DomainError("CubicSpline: evaluation outside knot range");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double u = 1.0 - t;
  return u * y_[i] + t * y_[i + 1] + h * h / 6.0 * ((u * u * u - u) * m_[i] + (t * t * t - t) * m_[i + 1]);
}

double CubicSpline::error_bound() const {
  const std::size_t n = x_.size();
  if (n < 5) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i + 4 < n; ++i) {
    const double d4 = y_[i] - 4 * y_[i + 1] + 6 * y_[i + 2] - 4 * y_[i + 3] + y_[i + 4];
    worst = std::max(worst, std::abs(d4));
  }
  // for near-uniform knots Delta^4 f ~ h^4 f''''
  return 3.0 / 128.0 * worst;
}

}  // namespace drspher
