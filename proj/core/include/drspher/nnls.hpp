#pragma once

#include <Eigen/Core>

namespace drspher {

struct NnlsOptions {
  /// Tikhonov damping relative to the largest squared column norm.
  double damping = 1e-10;
  /// Stop when max_j (A^T (b - A x))_j <= tolerance * max column norm * |b|.
  double tolerance = 1e-12;
  /// Outer iterations; 0 means 3 * columns.
  int max_iterations = 0;
  /// Continue undamped from the damped active set.
  bool refine = true;
};

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;  // |A x - b| (undamped)
  int iterations = 0;
  bool converged = false;
};

/// min |A x - b|_2 subject to x >= 0 (Lawson-Hanson active set). The
/// entering variable is the largest dual component, ties going to the
/// smallest index, so results are deterministic. With damping the active
/// set is first found for the Tikhonov-regularized problem; `refine` then
/// resumes the undamped iteration from that support.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const NnlsOptions& options = {});

}  // namespace drspher
