#include "drspher/nnls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "drspher/error.hpp"

namespace drspher {

namespace {

Eigen::VectorXd solve_subset(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<int>& set) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t c = 0; c < set.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = A.col(set[c]);
  return sub.colPivHouseholderQr().solve(b);
}

// Lawson-Hanson iterations from a feasible (x, passive) pair. Returns the
// number of outer iterations, negative when the budget ran out.
int active_set(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol, int max_iter, Eigen::VectorXd& x,
               std::vector<char>& passive) {
  const Eigen::Index n = A.cols();
  int iter = 0;
  while (true) {
    // Restore the passive-set solution first (no-op when x is already optimal on it).
    while (true) {
      std::vector<int> set;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j]) set.push_back(static_cast<int>(j));
      if (set.empty()) break;
      const Eigen::VectorXd z = solve_subset(A, b, set);
      bool feasible = true;
      for (Eigen::Index c = 0; c < z.size(); ++c)
        if (z(c) <= 0.0) feasible = false;
      if (feasible) {
        for (std::size_t c = 0; c < set.size(); ++c) x(set[c]) = z(static_cast<Eigen::Index>(c));
        break;
      }
      // step towards z until the first variable hits its bound
      double alpha = 1.0;
      int blocking = -1;
      for (std::size_t c = 0; c < set.size(); ++c) {
        const double zc = z(static_cast<Eigen::Index>(c));
        if (zc <= 0.0) {
          const double xc = x(set[c]);
          const double a = xc / (xc - zc);
          if (blocking < 0 || a < alpha) {
            alpha = a;
            blocking = set[c];
          }
        }
      }
      for (std::size_t c = 0; c < set.size(); ++c) {
        const int j = set[c];
        x(j) += alpha * (z(static_cast<Eigen::Index>(c)) - x(j));
        if (j == blocking || x(j) <= 0.0) {
          x(j) = 0.0;
          passive[j] = 0;
        }
      }
    }

    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    if (enter < 0) return iter;
    if (++iter > max_iter) return -iter;
    passive[enter] = 1;
  }
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in, const NnlsOptions& options) {
  const Eigen::Index m = A_in.rows(), n = A_in.cols();
  if (b_in.size() != m) throw DomainError("nnls: dimension mismatch");
  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    out.residual_norm = b_in.norm();
    out.converged = true;
    return out;
  }

  const double col_max = A_in.colwise().norm().maxCoeff();
  const double tol = options.tolerance * std::max(col_max, 1e-300) * std::max(b_in.norm(), 1e-300);
  const int max_iter = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(3 * n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);

  int iter = 0;
  if (options.damping > 0.0 && col_max > 0.0) {
    // Damped system [A; sqrt(delta) max|a_j| I] x = [b; 0].
    Eigen::MatrixXd A(m + n, n);
    A.topRows(m) = A_in;
    A.bottomRows(n) = std::sqrt(options.damping) * col_max * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + n);
    b.head(m) = b_in;
    iter = active_set(A, b, tol, max_iter, out.x, passive);
    if (iter < 0) {
      out.iterations = -iter;
      out.residual_norm = (A_in * out.x - b_in).norm();
      return out;
    }
    if (!options.refine) {
      out.iterations = iter;
      out.converged = true;
      out.residual_norm = (A_in * out.x - b_in).norm();
      return out;
    }
  }
  // Undamped pass, warm-started from the damped support when there is one.
  const int more = active_set(A_in, b_in, tol, max_iter, out.x, passive);
  out.converged = more >= 0;
  out.iterations = iter + std::abs(more);
  out.residual_norm = (A_in * out.x - b_in).norm();
  return out;
}

}  // namespace drspher
