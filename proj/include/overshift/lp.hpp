#pragma once

#include <Eigen/Dense>

namespace overshift {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

enum class Pricing {
  kBland,    // lowest-index improving column; never cycles
  kDantzig,  // most negative reduced cost, Bland after a degenerate streak
};

struct LpOptions {
  Pricing pricing = Pricing::kDantzig;
  double pivot_tolerance = 1e-9;
  double cost_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  double certify_tolerance = 1e-7;
  long max_iterations = 0;  // 0: scaled with the problem size
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  long iterations = 0;
  // Most negative reduced cost of the final basis, recomputed by LU.
  double dual_violation = 0.0;
};

// min c'x subject to A x = b, lower <= x <= upper. Bounds may be infinite.
// Two-phase dense simplex; an optimal result has its basis refactorized and
// its reduced costs certified nonnegative within certify_tolerance.
LpResult lp_solve(const Eigen::VectorXd& cost, const Eigen::MatrixXd& eq_matrix,
                  const Eigen::VectorXd& eq_rhs, const Eigen::VectorXd& lower,
                  const Eigen::VectorXd& upper, const LpOptions& options = {});

}  // namespace overshift
