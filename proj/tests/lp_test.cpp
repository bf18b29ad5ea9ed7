#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "overshift/errors.hpp"
#include "overshift/lp.hpp"
#include "overshift/rng.hpp"

namespace overshift {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

VectorXd Zeros(int n) { return VectorXd::Zero(n); }
VectorXd Infs(int n) { return VectorXd::Constant(n, kInf); }

// Minimum of c'x over the basic feasible solutions of A x = b, x >= 0,
// found by trying every column subset of size rank(A).
double VertexEnumeration(const VectorXd& c, const MatrixXd& a, const VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  double best = kInf;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    MatrixXd basis(m, m);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) {
        basis.col(static_cast<int>(cols.size())) = a.col(j);
        cols.push_back(j);
      }
    }
    Eigen::FullPivLU<MatrixXd> lu(basis);
    if (lu.rank() < m) continue;
    const VectorXd xb = lu.solve(b);
    if (xb.minCoeff() < -1e-10) continue;
    double obj = 0.0;
    for (int i = 0; i < m; ++i) obj += c(cols[i]) * xb(i);
    best = std::min(best, obj);
  }
  return best;
}

TEST(LpSolve, SingleEquality) {
  MatrixXd a(1, 1);
  a << 1.0;
  VectorXd b(1);
  b << 3.0;
  VectorXd c(1);
  c << 1.0;
  const LpResult r = lp_solve(c, a, b, Zeros(1), Infs(1));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x(0), 3.0, 1e-12);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
}

TEST(LpSolve, SumToOne) {
  MatrixXd a(1, 2);
  a << 1.0, 1.0;
  VectorXd b(1);
  b << 1.0;
  const LpResult r = lp_solve(VectorXd::Ones(2), a, b, Zeros(2), Infs(2));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_GE(r.dual_violation, -1e-7);
}

TEST(LpSolve, Infeasible) {
  MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  VectorXd b(2);
  b << 1.0, 2.0;
  EXPECT_EQ(lp_solve(VectorXd::Ones(2), a, b, Zeros(2), Infs(2)).status,
            LpStatus::kInfeasible);
  MatrixXd a1(1, 2);
  a1 << 1.0, 1.0;
  VectorXd b1(1);
  b1 << -1.0;
  EXPECT_EQ(lp_solve(VectorXd::Ones(2), a1, b1, Zeros(2), Infs(2)).status,
            LpStatus::kInfeasible);
}

TEST(LpSolve, Unbounded) {
  MatrixXd a(1, 2);
  a << 1.0, -1.0;
  VectorXd b(1);
  b << 1.0;
  VectorXd c(2);
  c << -1.0, 0.0;
  EXPECT_EQ(lp_solve(c, a, b, Zeros(2), Infs(2)).status, LpStatus::kUnbounded);
}

TEST(LpSolve, FreeAndBoxedVariables) {
  // min |x - 2| style: x free, x - y + z = 2, y,z >= 0, cost y + z.
  MatrixXd a(1, 3);
  a << 1.0, -1.0, 1.0;
  VectorXd b(1);
  b << 2.0;
  VectorXd c(3);
  c << 0.0, 1.0, 1.0;
  VectorXd lo(3);
  lo << -kInf, 0.0, 0.0;
  const LpResult r = lp_solve(c, a, b, lo, Infs(3));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_NEAR(r.x(0), 2.0, 1e-12);

  // max x1 + x2 with x1 in [0, 1], x2 in [-3, 0.5], x1 - x2 = 0.25.
  MatrixXd a2(1, 2);
  a2 << 1.0, -1.0;
  VectorXd b2(1);
  b2 << 0.25;
  VectorXd c2(2);
  c2 << -1.0, -1.0;
  VectorXd lo2(2);
  lo2 << 0.0, -3.0;
  VectorXd hi2(2);
  hi2 << 1.0, 0.5;
  const LpResult r2 = lp_solve(c2, a2, b2, lo2, hi2);
  ASSERT_EQ(r2.status, LpStatus::kOptimal);
  EXPECT_NEAR(r2.x(0), 0.75, 1e-12);
  EXPECT_NEAR(r2.x(1), 0.5, 1e-12);

  // Variable with only an upper bound.
  MatrixXd a3(1, 2);
  a3 << 1.0, 1.0;
  VectorXd b3(1);
  b3 << 0.0;
  VectorXd c3(2);
  c3 << 0.0, -1.0;
  VectorXd lo3(2);
  lo3 << 0.0, -kInf;
  VectorXd hi3(2);
  hi3 << kInf, -2.0;
  const LpResult r3 = lp_solve(c3, a3, b3, lo3, hi3);
  ASSERT_EQ(r3.status, LpStatus::kOptimal);
  EXPECT_NEAR(r3.x(1), -2.0, 1e-12);
  EXPECT_NEAR(r3.x(0), 2.0, 1e-12);
}

TEST(LpSolve, RedundantRows) {
  MatrixXd a(3, 3);
  a << 1, 1, 1, 2, 2, 2, 1, 0, -1;
  VectorXd b(3);
  b << 1, 2, 0;
  VectorXd c(3);
  c << 1, 2, 3;
  const LpResult r = lp_solve(c, a, b, Zeros(3), Infs(3));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
  EXPECT_LT((a * r.x - b).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(LpSolve, MatchesVertexEnumeration) {
  Rng rng(2024);
  for (int inst = 0; inst < 300; ++inst) {
    const int m = 1 + inst % 3;
    const int n = m + 1 + static_cast<int>(rng() % (7 - m));
    MatrixXd a(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    const VectorXd b = a * x0;
    VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = rng.uniform();
    const double oracle = VertexEnumeration(c, a, b);
    const LpResult r = lp_solve(c, a, b, Zeros(n), Infs(n));
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "instance " << inst;
    EXPECT_NEAR(r.objective, oracle, 1e-7) << "instance " << inst;
    EXPECT_LT((a * r.x - b).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_GE(r.x.minCoeff(), 0.0);
  }
}

TEST(LpSolve, BlandAndDantzigAgree) {
  Rng rng(7);
  for (int inst = 0; inst < 50; ++inst) {
    const int m = 4;
    const int n = 12;
    MatrixXd a = MatrixXd::Zero(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = std::round(4.0 * rng.uniform() - 2.0);
    }
    VectorXd x0 = VectorXd::Zero(n);
    x0(inst % n) = 1.0;
    const VectorXd b = a * x0;
    VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = std::round(3.0 * rng.uniform());
    LpOptions bland;
    bland.pricing = Pricing::kBland;
    const LpResult r1 = lp_solve(c, a, b, Zeros(n), Infs(n), bland);
    const LpResult r2 = lp_solve(c, a, b, Zeros(n), Infs(n));
    ASSERT_EQ(r1.status, LpStatus::kOptimal);
    ASSERT_EQ(r2.status, LpStatus::kOptimal);
    EXPECT_NEAR(r1.objective, r2.objective, 1e-9);
  }
}

TEST(LpSolve, IterationGuard) {
  Rng rng(5);
  const int m = 6;
  const int n = 30;
  MatrixXd a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform();
  }
  const VectorXd b = a * VectorXd::Ones(n);
  LpOptions opt;
  opt.max_iterations = 1;
  try {
    lp_solve(VectorXd::Ones(n), a, b, Zeros(n), Infs(n), opt);
    FAIL() << "expected numeric-failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumericFailure);
  }
}

TEST(LpSolve, DimensionMismatch) {
  MatrixXd a(1, 2);
  a << 1.0, 1.0;
  VectorXd b(2);
  b << 1.0, 1.0;
  EXPECT_THROW(lp_solve(VectorXd::Ones(2), a, b, Zeros(2), Infs(2)), Error);
}

}  // namespace
}  // namespace overshift
