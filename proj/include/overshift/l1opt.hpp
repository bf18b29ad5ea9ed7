#pragma once

#include "overshift/linsys.hpp"
#include "overshift/lp.hpp"

namespace overshift {

// Minimum-norm rule: split c = c+ - c-, minimize sum(c+ + c-).
ShiftRule solve_l1(const LinearSystem& sys, const LpOptions& options = {});

// Minimum total variation over the full ordered coefficient sequence. For a
// symmetric system the expanded sequence -c_P..-c_1, c_1..c_P is used, so the
// jump across zero contributes 2|c_1|.
ShiftRule solve_tv(const LinearSystem& sys, const LpOptions& options = {});

double total_variation(const ShiftRule& rule);

// Runs of adjacent nonzero coefficients (|c| > threshold * max|c|) sharing a
// sign, over the expanded rule.
struct ClusterStats {
  int nonzeros = 0;
  int runs = 0;
  int sign_changes = 0;
  double mean_run_length = 0.0;
};
ClusterStats cluster_stats(const ShiftRule& rule, double threshold = 1e-9);

}  // namespace overshift
