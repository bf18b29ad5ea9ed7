#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "overshift/specfun.hpp"
#include "overshift/spectrum.hpp"

namespace overshift {

enum class RuleSource {
  kL1,
  kL2,
  kTV,
  kTriangleTruncated,
  kEquispacedClosedForm,
  kKernel,
  kManual,
};

const char* to_string(RuleSource source);
RuleSource rule_source_from_string(const std::string& name);

// A symmetric rule stores only the positive shifts; the coefficient at -s
// is the negation of the one at s.
struct ShiftRule {
  std::vector<double> shifts;
  std::vector<double> coefficients;
  bool symmetric = false;
  RuleSource source = RuleSource::kManual;

  // Full rule as (shift, coefficient) pairs sorted by shift.
  ShiftRule expanded() const;
  // Norm of the expanded rule.
  double l1_norm() const;
  std::size_t size() const { return shifts.size(); }
};

void validate(const ShiftRule& rule);

struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<double> shifts;
  bool symmetric = false;
};

enum class GridKind { kOdd, kEven, kUniform };

GridKind grid_kind_from_string(const std::string& name);
std::vector<double> shift_grid(GridKind kind, int p, double b);
// Strictly positive members of a grid, for symmetric systems.
std::vector<double> positive_half(const std::vector<double>& grid);

LinearSystem assemble(const FrequencySet& omega, const std::vector<double>& shifts,
                      bool symmetric);

inline constexpr double kDefaultRankTolerance = 1e-10;

bool feasible(const LinearSystem& sys, double tol = kDefaultRankTolerance);
ShiftRule solve_l2(const LinearSystem& sys, double tol = kDefaultRankTolerance);

// max over w in omega of |sum_p c_p exp(i w s_p) - i w|.
double verify(const ShiftRule& rule, const FrequencySet& omega);
// sum_p c_p exp(i w s_p) for the expanded rule.
std::complex<double> rule_response(const ShiftRule& rule, double omega);
double apply_rule(const ShiftRule& rule, const SpectralFunction& f, double theta);
// F_n = sum_p c_p exp(i n s_p), n = 0..max_harmonic, for rules on a uniform
// grid inside (-pi, pi].
std::vector<std::complex<double>> dft_coefficients(const ShiftRule& rule,
                                                   int max_harmonic);

double residual_inf(const LinearSystem& sys, const Eigen::VectorXd& c);

}  // namespace overshift
