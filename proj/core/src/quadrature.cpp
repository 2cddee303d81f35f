#include "drspher/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "drspher/error.hpp"

namespace drspher {

namespace {

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double s = f(c - x) + f(c + x);
    resk += kWgk[j] * s;
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

double UniformGrid::at(int i) const {
  if (i == count - 1) return max;
  return min + i * step();
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  const int half = count / 2;
  const bool sym = is_symmetric() && count % 2 == 1;
  for (int i = 0; i < count; ++i) out[i] = at(i);
  if (sym) {
    // exact mirror symmetry and an exact zero in the middle
    out[half] = 0.0;
    for (int i = 0; i < half; ++i) out[i] = -out[count - 1 - i];
  }
  return out;
}

bool UniformGrid::is_symmetric() const { return min == -max; }

void UniformGrid::validate(const char* what) const {
  if (count < 2 || !(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
    throw DomainError(std::string(what) + ": grid needs count >= 2 and max > min");
  }
}

std::vector<double> trapezoid_weights(const UniformGrid& g) {
  g.validate("trapezoid_weights");
  std::vector<double> w(g.count, g.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_intervals) {
  if (a == b) return {};
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  double total = first.value;
  double error = first.error;
  int evals = 15;
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (intervals >= max_intervals) {
      throw NumericalError("integrate_adaptive: interval budget exhausted (error estimate " +
                           std::to_string(error) + ")");
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    evals += 30;
    ++intervals;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // re-sum to drop the accumulated rounding of the running totals
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, evals};
}

PanelRule PanelRule::make(double a, double b, int panels) {
  if (panels < 1 || !(b > a)) throw DomainError("PanelRule: need b > a and at least one panel");
  PanelRule rule;
  rule.panels = panels;
  rule.nodes.reserve(panels * kPerPanel);
  rule.kronrod.reserve(panels * kPerPanel);
  rule.gauss.reserve(panels * kPerPanel);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p == panels - 1) ? b : lo + width;
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    auto push = [&](double x, double wk, double wg) {
      rule.nodes.push_back(x);
      rule.kronrod.push_back(wk * h);
      rule.gauss.push_back(wg * h);
    };
    for (int j = 0; j < 7; ++j) push(c - h * kXgk[j], kWgk[j], j % 2 == 1 ? kWg[j / 2] : 0.0);
    push(c, kWgk[7], kWg[3]);
    for (int j = 6; j >= 0; --j) push(c + h * kXgk[j], kWgk[j], j % 2 == 1 ? kWg[j / 2] : 0.0);
  }
  return rule;
}

PanelRule PanelRule::with_width(double a, double b, double width) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-12)));
  return make(a, b, panels);
}

QuadResult apply(const PanelRule& rule, std::span<const double> f) {
  if (f.size() != rule.size()) throw DomainError("apply: sample count does not match rule");
  QuadResult out;
  for (int p = 0; p < rule.panels; ++p) {
    double k = 0.0;
    double g = 0.0;
    for (int j = 0; j < PanelRule::kPerPanel; ++j) {
      const std::size_t i = p * PanelRule::kPerPanel + j;
      k += rule.kronrod[i] * f[i];
      g += rule.gauss[i] * f[i];
    }
    out.value += k;
    out.error += std::abs(k - g);
  }
  out.evaluations = static_cast<int>(f.size());
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre: n >= 1 required");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace drspher
