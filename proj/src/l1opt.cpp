#include "overshift/l1opt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "overshift/errors.hpp"

namespace overshift {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_feasible(const LinearSystem& sys) {
  if (!feasible(sys)) {
    throw Error(ErrorKind::kNoSolution,
                "shift system is inconsistent (rank test failed); add shifts or widen the grid");
  }
}

ShiftRule finish(const LinearSystem& sys, const VectorXd& c, RuleSource source) {
  const double res = residual_inf(sys, c);
  if (!(res < 1e-8)) {
    throw Error(ErrorKind::kNumericFailure,
                std::string(to_string(source)) + " residual " + std::to_string(res) +
                    " above 1e-8");
  }
  ShiftRule rule;
  rule.shifts = sys.shifts;
  rule.coefficients.assign(c.data(), c.data() + c.size());
  rule.symmetric = sys.symmetric;
  rule.source = source;
  return rule;
}

// Rank-deficient systems are replaced by the equivalent rows of their
// numerically significant singular subspace, which keeps simplex bases
// away from near-singular pivots.
void compress(const MatrixXd& a, const VectorXd& b, MatrixXd* out_a, VectorXd* out_b) {
  *out_a = a;
  *out_b = b;
  if (a.rows() < 2) return;
  Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
  if (r == a.rows()) return;
  *out_a = s.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
  *out_b = svd.matrixU().leftCols(r).transpose() * b;
}

}  // namespace

ShiftRule solve_l1(const LinearSystem& sys, const LpOptions& options) {
  require_feasible(sys);
  const Index n = sys.matrix.cols();
  const Index m = sys.matrix.rows();
  if (m == 0) return finish(sys, VectorXd::Zero(n), RuleSource::kL1);
  MatrixXd am;
  VectorXd bm;
  compress(sys.matrix, sys.rhs, &am, &bm);
  MatrixXd a(am.rows(), 2 * n);
  a << am, -am;
  const VectorXd cost = VectorXd::Ones(2 * n);
  const VectorXd lo = VectorXd::Zero(2 * n);
  const VectorXd hi = VectorXd::Constant(2 * n, kInf);
  const LpResult r = lp_solve(cost, a, bm, lo, hi, options);
  if (r.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kNoSolution,
                std::string("L1 program is ") + to_string(r.status));
  }
  return finish(sys, r.x.head(n) - r.x.tail(n), RuleSource::kL1);
}

ShiftRule solve_tv(const LinearSystem& sys, const LpOptions& options) {
  require_feasible(sys);
  const Index n = sys.matrix.cols();
  const Index m = sys.matrix.rows();
  for (Index p = 1; p < n; ++p) {
    if (!(sys.shifts[p] > sys.shifts[p - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "solve_tv: shifts must be strictly increasing");
    }
  }
  if (m == 0 || n == 0) return finish(sys, VectorXd::Zero(n), RuleSource::kTV);

  // Differences: symmetric systems add the jump c_1 - (-c_1) at the origin.
  const Index k = sys.symmetric ? n : n - 1;
  const double weight = sys.symmetric ? 2.0 : 1.0;
  const Index vars = n + 2 * k;
  MatrixXd am;
  VectorXd bm;
  compress(sys.matrix, sys.rhs, &am, &bm);
  const Index mr = am.rows();
  MatrixXd a = MatrixXd::Zero(mr + k, vars);
  VectorXd b = VectorXd::Zero(mr + k);
  a.topLeftCorner(mr, n) = am;
  b.head(mr) = bm;
  for (Index d = 0; d < k; ++d) {
    const Index row = mr + d;
    const Index hi_idx = sys.symmetric ? d : d + 1;
    a(row, hi_idx) = 1.0;
    if (hi_idx > 0) a(row, hi_idx - 1) = -1.0;
    a(row, n + d) = -1.0;
    a(row, n + k + d) = 1.0;
  }
  VectorXd cost = VectorXd::Zero(vars);
  cost.tail(2 * k).setConstant(weight);
  VectorXd lo = VectorXd::Zero(vars);
  lo.head(n).setConstant(-kInf);
  const VectorXd hi = VectorXd::Constant(vars, kInf);
  const LpResult r = lp_solve(cost, a, b, lo, hi, options);
  if (r.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kNoSolution,
                std::string("TV program is ") + to_string(r.status));
  }
  return finish(sys, r.x.head(n), RuleSource::kTV);
}

double total_variation(const ShiftRule& rule) {
  const ShiftRule full = rule.expanded();
  double tv = 0.0;
  for (std::size_t p = 1; p < full.coefficients.size(); ++p) {
    tv += std::abs(full.coefficients[p] - full.coefficients[p - 1]);
  }
  return tv;
}

ClusterStats cluster_stats(const ShiftRule& rule, double threshold) {
  const ShiftRule full = rule.expanded();
  double cmax = 0.0;
  for (double c : full.coefficients) cmax = std::max(cmax, std::abs(c));
  ClusterStats st;
  if (cmax == 0.0) return st;
  int prev_sign = 0;       // sign of the previous entry, 0 if it was zero
  int last_nz_sign = 0;    // sign of the most recent nonzero entry
  for (double c : full.coefficients) {
    const int s = std::abs(c) > threshold * cmax ? (c > 0 ? 1 : -1) : 0;
    if (s != 0) {
      ++st.nonzeros;
      if (s != prev_sign) ++st.runs;
      if (last_nz_sign != 0 && s != last_nz_sign) ++st.sign_changes;
      last_nz_sign = s;
    }
    prev_sign = s;
  }
  st.mean_run_length = st.runs ? static_cast<double>(st.nonzeros) / st.runs : 0.0;
  return st;
}

}  // namespace overshift
