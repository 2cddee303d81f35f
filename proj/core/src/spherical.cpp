#include "drspher/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "drspher/error.hpp"

namespace drspher {

namespace {

constexpr int kLogDensityTerms = 40;
constexpr int kMaxSeriesTerms = 400;
constexpr int kMaxRows = 10;  // extrapolation sequence 2, 4, ..., 20

// r A'(r)/A(r) = (m+k) x coth x + k x tanh x with x = r/2, as a series in r^2.
std::vector<double> make_log_density_series(int m, int k) {
  const int L = kLogDensityTerms;
  std::vector<double> c(L), s(L);  // cosh x = sum c_j y^j, sinh x / x = sum s_j y^j, y = x^2
  c[0] = 1.0;
  s[0] = 1.0;
  for (int j = 1; j < L; ++j) {
    c[j] = c[j - 1] / ((2.0 * j - 1.0) * (2.0 * j));
    s[j] = s[j - 1] / ((2.0 * j) * (2.0 * j + 1.0));
  }
  std::vector<double> coth(L), tanh_over(L);  // x coth x = c/s ; (tanh x)/x = s/c
  for (int j = 0; j < L; ++j) {
    double q = c[j];
    double t = s[j];
    for (int i = 1; i <= j; ++i) {
      q -= s[i] * coth[j - i];
      t -= c[i] * tanh_over[j - i];
    }
    coth[j] = q;
    tanh_over[j] = t;
  }
  std::vector<double> p(L);
  double quarter = 1.0;
  for (int l = 0; l < L; ++l) {
    const double xtanh = (l == 0) ? 0.0 : tanh_over[l - 1];
    p[l] = ((m + k) * coth[l] + k * xtanh) * quarter;
    quarter *= 0.25;
  }
  return p;
}

double magnitude(double x) { return std::abs(x); }
double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <class T>
struct State {
  T u{};
  T v{};

  State operator+(const State& o) const { return {u + o.u, v + o.v}; }
  State operator-(const State& o) const { return {u - o.u, v - o.v}; }
  State operator*(double a) const { return {u * a, v * a}; }
};

template <class T>
struct RadialOde {
  double half_mk;
  double half_k;
  T kappa;

  State<T> operator()(double r, const State<T>& y) const {
    const double t = std::tanh(0.5 * r);
    const double p = half_mk / t + half_k * t;
    return {y.v, -p * y.v - kappa * y.u};
  }
};

// Gragg-Bulirsch-Stoer: modified midpoint + polynomial extrapolation in h^2.
template <class T>
class Extrapolator {
 public:
  Extrapolator(RadialOde<T> f, double omega, double tol) : f_(f), omega_(omega), tol_(tol) {}

  void advance(State<T>& y, double& r, double r_end, double& H) const {
    while (r < r_end) {
      const double remaining = r_end - r;
      const bool last = H >= remaining;
      const double step = last ? remaining : H;
      int rows_used = 0;
      State<T> next;
      if (attempt(y, r, step, next, rows_used)) {
        y = next;
        r = last ? r_end : r + step;
        if (!last || step == H) {
          if (rows_used <= 2) {
            H = step * 2.0;
          } else if (rows_used <= 4) {
            H = step * 1.4;
          } else if (rows_used >= 7) {
            H = step * 0.7;
          }
        }
      } else {
        H = step * 0.25;
        if (H < 1e-12 * (1.0 + r)) {
          throw NumericalError("spherical ODE: step size underflow at r = " + std::to_string(r));
        }
      }
    }
  }

 private:
  State<T> midpoint(const State<T>& y, double r, double H, int n) const {
    const double h = H / n;
    State<T> z0 = y;
    State<T> z1 = z0 + f_(r, z0) * h;
    for (int j = 1; j < n; ++j) {
      State<T> z2 = z0 + f_(r + j * h, z1) * (2.0 * h);
      z0 = z1;
      z1 = z2;
    }
    return (z1 + z0 + f_(r + H, z1) * h) * 0.5;
  }

  double amplitude(const State<T>& y) const { return magnitude(y.u) + magnitude(y.v) / omega_; }

  bool attempt(const State<T>& y, double r, double H, State<T>& out, int& rows_used) const {
    std::array<std::array<State<T>, kMaxRows>, kMaxRows> table;
    const double scale0 = amplitude(y);
    for (int j = 0; j < kMaxRows; ++j) {
      const int nj = 2 * (j + 1);
      table[j][0] = midpoint(y, r, H, nj);
      for (int i = 1; i <= j; ++i) {
        const double ratio = static_cast<double>(nj) / (2 * (j - i + 1));
        const double denom = ratio * ratio - 1.0;
        table[j][i] = table[j][i - 1] + (table[j][i - 1] - table[j - 1][i - 1]) * (1.0 / denom);
      }
      if (j >= 1) {
        const State<T> diff = table[j][j] - table[j][j - 1];
        const double scale = std::max(scale0, amplitude(table[j][j]));
        const double err = amplitude(diff) / (scale > 0.0 ? scale : 1.0);
        if (err <= tol_) {
          out = table[j][j];
          rows_used = j + 1;
          return true;
        }
      }
    }
    return false;
  }

  RadialOde<T> f_;
  double omega_;
  double tol_;
};

}  // namespace

SphericalEvaluator::SphericalEvaluator(const SpaceParams& params, SphericalOptions options)
    : params_(params), options_(options), p_series_(make_log_density_series(params.m, params.k)) {
  if (!(options_.series_radius > 0.0 && options_.series_radius <= 1.5)) {
    throw DomainError("SphericalEvaluator: series radius must lie in (0, 1.5]");
  }
  if (!(options_.tolerance > 0.0)) throw DomainError("SphericalEvaluator: tolerance must be positive");
}

double SphericalEvaluator::strip_half_width() const { return 4.0 * params_.rho_value(); }

void SphericalEvaluator::check_strip(std::complex<double> lambda) const {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw DomainError("spherical function: non-finite lambda");
  }
  if (std::abs(lambda.imag()) > strip_half_width() * (1.0 + 1e-15)) {
    throw DomainError("spherical function: |Im lambda| exceeds the supported strip 4 rho");
  }
}

template <class T>
std::vector<T> SphericalEvaluator::solve(T kappa, std::span<const double> rs) const {
  std::vector<T> out(rs.size());
  if (rs.empty()) return out;
  for (std::size_t j = 0; j < rs.size(); ++j) {
    if (!(rs[j] >= 0.0) || !std::isfinite(rs[j])) throw DomainError("spherical function: radius must be >= 0");
    if (j > 0 && rs[j] < rs[j - 1]) throw DomainError("spherical function: radii must be ascending");
  }
  const double r0 = options_.series_radius;
  const double series_reach = std::min(r0, rs.back());

  // a_J [2J(2J-1) + 2J p_0] = -kappa a_{J-1} - sum_{l=1}^{J-1} 2(J-l) p_l a_{J-l}
  std::vector<T> a{T(1.0)};
  {
    const double x2 = series_reach * series_reach;
    double power = 1.0;
    double largest = 1.0;
    int small_run = 0;
    for (int J = 1;; ++J) {
      if (J > kMaxSeriesTerms) throw NumericalError("spherical series did not converge");
      T acc = kappa * a[J - 1];
      const int lmax = std::min(J - 1, kLogDensityTerms - 1);
      for (int l = 1; l <= lmax; ++l) acc += (2.0 * (J - l) * p_series_[l]) * a[J - l];
      const double denom = 2.0 * J * (2.0 * J - 1.0) + 2.0 * J * p_series_[0];
      a.push_back(-acc / denom);
      power *= x2;
      const double term = magnitude(a.back()) * power;
      largest = std::max(largest, term);
      small_run = (term <= 1e-18 * largest) ? small_run + 1 : 0;
      if (small_run >= 3 || series_reach == 0.0) break;
    }
  }
  auto series = [&](double r, T& u, T& du) {
    const double x2 = r * r;
    u = T(0.0);
    du = T(0.0);
    double power = 1.0;  // r^(2J)
    for (std::size_t J = 1; J < a.size(); ++J) {
      du += (2.0 * J) * a[J] * (power * r);  // 2J a_J r^(2J-1)
      power *= x2;
      u += a[J] * power;
    }
    u += a[0];
  };

  std::size_t j = 0;
  for (; j < rs.size() && rs[j] <= r0; ++j) {
    T du;
    series(rs[j], out[j], du);
  }
  if (j == rs.size()) return out;

  State<T> y;
  series(r0, y.u, y.v);
  const double omega = std::max(1.0, std::sqrt(magnitude(kappa)));
  const double half_mk = 0.5 * (params_.m + params_.k);
  const double half_k = 0.5 * params_.k;
  Extrapolator<T> ode(RadialOde<T>{half_mk, half_k, kappa}, omega, std::max(1e-14, 1e-3 * options_.tolerance));
  double r = r0;
  double H = 0.5 / omega;
  for (; j < rs.size(); ++j) {
    ode.advance(y, r, rs[j], H);
    out[j] = y.u;
  }
  return out;
}

std::vector<double> SphericalEvaluator::real_row(double lambda, std::span<const double> rs) const {
  check_strip({lambda, 0.0});
  const double rho = params_.rho_value();
  return solve<double>(lambda * lambda + rho * rho, rs);
}

std::vector<double> SphericalEvaluator::imaginary_row(double mu, std::span<const double> rs) const {
  check_strip({0.0, mu});
  const double rho = params_.rho_value();
  return solve<double>(rho * rho - mu * mu, rs);
}

std::vector<std::complex<double>> SphericalEvaluator::eval_many(std::complex<double> lambda,
                                                                std::span<const double> rs) const {
  check_strip(lambda);
  std::vector<std::complex<double>> out(rs.size());
  if (lambda.imag() == 0.0 || lambda.real() == 0.0) {
    const auto row = lambda.imag() == 0.0 ? real_row(lambda.real(), rs) : imaginary_row(lambda.imag(), rs);
    std::transform(row.begin(), row.end(), out.begin(), [](double v) { return std::complex<double>(v, 0.0); });
    return out;
  }
  const double rho = params_.rho_value();
  return solve<std::complex<double>>(lambda * lambda + rho * rho, rs);
}

std::complex<double> SphericalEvaluator::eval(std::complex<double> lambda, double r) const {
  const double rs[1] = {r};
  return eval_many(lambda, rs)[0];
}

double SphericalEvaluator::eigen_residual(std::complex<double> lambda, double r) const {
  if (!(r > 0.0)) throw DomainError("eigen_residual: r must be positive");
  const double rho = params_.rho_value();
  const std::complex<double> kappa = lambda * lambda + rho * rho;
  double h = 0.02 / std::sqrt(std::max(1.0, std::abs(kappa)));
  if (r - 2.0 * h <= 0.0) h = r / 3.0;
  const double rs[5] = {r - 2 * h, r - h, r, r + h, r + 2 * h};
  const auto f = eval_many(lambda, rs);
  const std::complex<double> d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
  const std::complex<double> d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
  return std::abs(d2 + log_density_derivative(params_, r) * d1 + kappa * f[2]);
}

Eigen::MatrixXcd SphericalEvaluator::phi_grid(std::span<const std::complex<double>> lambdas,
                                              std::span<const double> rs) const {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(lambdas.size()), static_cast<Eigen::Index>(rs.size()));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    std::vector<std::complex<double>> row;
    try {
      row = eval_many(lambdas[i], rs);
    } catch (const DomainError& e) {
      throw DomainError("phi_grid: lambda index " + std::to_string(i) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("phi_grid: lambda index " + std::to_string(i) + ": " + e.what());
    }
    for (std::size_t j = 0; j < rs.size(); ++j) out(i, j) = row[j];
  }
  return out;
}

void write_phi_csv(std::ostream& os, std::complex<double> lambda, std::span<const double> rs,
                   std::span<const std::complex<double>> values) {
  const auto old = os.precision(17);
  os << "lambda_re,lambda_im,r,phi_re,phi_im\n";
  for (std::size_t j = 0; j < rs.size(); ++j) {
    os << lambda.real() << ',' << lambda.imag() << ',' << rs[j] << ',' << values[j].real() << ','
       << values[j].imag() << '\n';
  }
  os.precision(old);
}

}  // namespace drspher
