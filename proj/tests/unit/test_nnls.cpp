#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "drspher/error.hpp"
#include "drspher/nnls.hpp"

using namespace drspher;

namespace {

// Exhaustive NNLS: least squares on every support, keep the best feasible one.
Eigen::VectorXd brute_force(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_res = b.norm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) cols.push_back(j);
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    if ((z.array() < 0).any()) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) x(cols[c]) = z(static_cast<Eigen::Index>(c));
    const double res = (A * x - b).norm();
    if (res < best_res - 1e-14) {
      best_res = res;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST(Nnls, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::MatrixXd A(8, 5);
    Eigen::VectorXd b(8);
    for (int i = 0; i < 8; ++i) {
      b(i) = N(rng);
      for (int j = 0; j < 5; ++j) A(i, j) = N(rng);
    }
    const auto want = brute_force(A, b);
    for (double damping : {0.0, 1e-10}) {
      NnlsOptions opt;
      opt.damping = damping;
      const auto got = nnls(A, b, opt);
      EXPECT_TRUE(got.converged);
      EXPECT_LT((got.x - want).cwiseAbs().maxCoeff(), 1e-10) << trial << " damping " << damping;
      EXPECT_GE(got.x.minCoeff(), 0.0);
    }
  }
}

TEST(Nnls, RefineRemovesDampingBias) {
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, 1, 1.001, 1, 0.999;
  const Eigen::VectorXd x_true = (Eigen::VectorXd(2) << 0.3, 0.7).finished();
  const Eigen::VectorXd b = A * x_true;
  NnlsOptions opt;
  opt.damping = 1e-6;
  opt.refine = false;
  const auto biased = nnls(A, b, opt);
  opt.refine = true;
  const auto refined = nnls(A, b, opt);
  EXPECT_GT((biased.x - x_true).norm(), 1e-3);
  EXPECT_LT((refined.x - x_true).norm(), 1e-10);
}

TEST(Nnls, EdgeCases) {
  EXPECT_THROW(nnls(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Ones(2)), DomainError);
  const auto r = nnls(Eigen::MatrixXd::Identity(3, 3), -Eigen::VectorXd::Ones(3));
  EXPECT_EQ(r.x.norm(), 0.0);
  EXPECT_TRUE(r.converged);
}
