#include "overshift/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>

#include "overshift/errors.hpp"

namespace overshift {

const char* to_string(RuleSource source) {
  switch (source) {
    case RuleSource::kL1: return "l1";
    case RuleSource::kL2: return "l2";
    case RuleSource::kTV: return "tv";
    case RuleSource::kTriangleTruncated: return "triangle-truncated";
    case RuleSource::kEquispacedClosedForm: return "equispaced-closed-form";
    case RuleSource::kKernel: return "kernel";
    case RuleSource::kManual: return "manual";
  }
  return "manual";
}

RuleSource rule_source_from_string(const std::string& name) {
  for (RuleSource s : {RuleSource::kL1, RuleSource::kL2, RuleSource::kTV,
                       RuleSource::kTriangleTruncated,
                       RuleSource::kEquispacedClosedForm, RuleSource::kKernel,
                       RuleSource::kManual}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown rule source '" + name + "'");
}

void validate(const ShiftRule& rule) {
  if (rule.shifts.size() != rule.coefficients.size()) {
    throw Error(ErrorKind::kInvalidRule, "shift and coefficient counts differ");
  }
  for (std::size_t i = 0; i < rule.shifts.size(); ++i) {
    if (!std::isfinite(rule.shifts[i]) || !std::isfinite(rule.coefficients[i])) {
      throw Error(ErrorKind::kInvalidRule, "rule entries must be finite");
    }
    if (rule.symmetric && !(rule.shifts[i] > 0.0)) {
      throw Error(ErrorKind::kInvalidRule, "symmetric rules store positive shifts only");
    }
  }
}

ShiftRule ShiftRule::expanded() const {
  validate(*this);
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    pairs.emplace_back(shifts[i], coefficients[i]);
    if (symmetric) pairs.emplace_back(-shifts[i], -coefficients[i]);
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  ShiftRule out;
  out.symmetric = false;
  out.source = source;
  for (const auto& [s, c] : pairs) {
    out.shifts.push_back(s);
    out.coefficients.push_back(c);
  }
  return out;
}

double ShiftRule::l1_norm() const {
  double s = 0.0;
  for (double c : coefficients) s += std::abs(c);
  return symmetric ? 2.0 * s : s;
}

GridKind grid_kind_from_string(const std::string& name) {
  if (name == "odd") return GridKind::kOdd;
  if (name == "even") return GridKind::kEven;
  if (name == "uniform") return GridKind::kUniform;
  throw Error(ErrorKind::kInvalidArgument, "unknown grid kind '" + name + "'");
}

std::vector<double> shift_grid(GridKind kind, int p, double b) {
  if (p < 1 || !(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorKind::kInvalidArgument, "shift_grid needs P >= 1 and B > 0");
  }
  std::vector<double> out;
  switch (kind) {
    case GridKind::kOdd:
      for (int k = -p; k <= p; ++k) out.push_back(2.0 * b * k / (2.0 * p + 1.0));
      break;
    case GridKind::kEven:
      for (int k = p; k >= 1; --k) out.push_back(-b * (2.0 * k - 1.0) / (2.0 * p));
      for (int k = 1; k <= p; ++k) out.push_back(b * (2.0 * k - 1.0) / (2.0 * p));
      break;
    case GridKind::kUniform:
      for (int k = -p; k <= p; ++k) out.push_back(b * k / p);
      break;
  }
  return out;
}

std::vector<double> positive_half(const std::vector<double>& grid) {
  std::vector<double> out;
  for (double s : grid) {
    if (s > 0.0) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LinearSystem assemble(const FrequencySet& omega, const std::vector<double>& shifts,
                      bool symmetric) {
  LinearSystem sys;
  sys.shifts = shifts;
  sys.symmetric = symmetric;
  const auto pos = omega.positive_part();
  const Eigen::Index n = static_cast<Eigen::Index>(shifts.size());
  if (symmetric) {
    for (double s : shifts) {
      if (!(s > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "symmetric systems take the positive half of the shifts");
      }
    }
    sys.matrix.resize(static_cast<Eigen::Index>(pos.size()), n);
    sys.rhs.resize(static_cast<Eigen::Index>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (Eigen::Index p = 0; p < n; ++p) {
        sys.matrix(i, p) = 2.0 * std::sin(pos[i] * shifts[p]);
      }
      sys.rhs(i) = pos[i];
    }
    return sys;
  }
  const Eigen::Index zero_rows = omega.contains_zero() ? 1 : 0;
  const Eigen::Index rows = zero_rows + 2 * static_cast<Eigen::Index>(pos.size());
  sys.matrix.resize(rows, n);
  sys.rhs.setZero(rows);
  Eigen::Index r = 0;
  if (zero_rows) {
    sys.matrix.row(r).setOnes();
    ++r;
  }
  for (double w : pos) {
    for (Eigen::Index p = 0; p < n; ++p) {
      sys.matrix(r, p) = std::cos(w * shifts[p]);
      sys.matrix(r + 1, p) = std::sin(w * shifts[p]);
    }
    sys.rhs(r + 1) = w;
    r += 2;
  }
  return sys;
}

namespace {

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

}  // namespace

bool feasible(const LinearSystem& sys, double tol) {
  if (sys.matrix.rows() == 0) return true;
  if (sys.rhs.lpNorm<Eigen::Infinity>() == 0.0) return true;
  Eigen::MatrixXd aug(sys.matrix.rows(), sys.matrix.cols() + 1);
  aug << sys.matrix, sys.rhs;
  return numerical_rank(sys.matrix, tol) == numerical_rank(aug, tol);
}

double residual_inf(const LinearSystem& sys, const Eigen::VectorXd& c) {
  if (sys.matrix.rows() == 0) return 0.0;
  return (sys.matrix * c - sys.rhs).lpNorm<Eigen::Infinity>();
}

ShiftRule solve_l2(const LinearSystem& sys, double tol) {
  if (!feasible(sys, tol)) {
    throw Error(ErrorKind::kNoSolution,
                "shift system is inconsistent (rank test failed); add shifts or widen the grid");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(sys.matrix.cols());
  if (sys.matrix.rows() > 0 && sys.matrix.cols() > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(tol);
    cod.compute(sys.matrix);
    c = cod.solve(sys.rhs);
  }
  const double res = residual_inf(sys, c);
  if (!(res < 1e-9)) {
    throw Error(ErrorKind::kNumericFailure,
                "solve_l2 residual " + std::to_string(res) + " above 1e-9");
  }
  ShiftRule rule;
  rule.shifts = sys.shifts;
  rule.coefficients.assign(c.data(), c.data() + c.size());
  rule.symmetric = sys.symmetric;
  rule.source = RuleSource::kL2;
  return rule;
}

std::complex<double> rule_response(const ShiftRule& rule, double omega) {
  validate(rule);
  std::complex<double> acc = 0.0;
  for (std::size_t p = 0; p < rule.shifts.size(); ++p) {
    if (rule.symmetric) {
      acc += std::complex<double>(0.0, 2.0 * rule.coefficients[p] *
                                           std::sin(omega * rule.shifts[p]));
    } else {
      acc += rule.coefficients[p] * std::polar(1.0, omega * rule.shifts[p]);
    }
  }
  return acc;
}

double verify(const ShiftRule& rule, const FrequencySet& omega) {
  double worst = 0.0;
  for (double w : omega.frequencies()) {
    worst = std::max(worst, std::abs(rule_response(rule, w) - std::complex<double>(0.0, w)));
  }
  return worst;
}

double apply_rule(const ShiftRule& rule, const SpectralFunction& f, double theta) {
  validate(rule);
  double acc = 0.0;
  for (std::size_t p = 0; p < rule.shifts.size(); ++p) {
    const double c = rule.coefficients[p];
    const double s = rule.shifts[p];
    if (rule.symmetric) {
      acc += c * (f.eval(theta + s) - f.eval(theta - s));
    } else {
      acc += c * f.eval(theta + s);
    }
  }
  return acc;
}

std::vector<std::complex<double>> dft_coefficients(const ShiftRule& rule,
                                                   int max_harmonic) {
  if (max_harmonic < 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_harmonic must be >= 0");
  }
  const ShiftRule full = rule.expanded();
  const auto& s = full.shifts;
  constexpr double kPi = std::numbers::pi;
  for (double x : s) {
    if (x <= -kPi - 1e-12 || x > kPi + 1e-12) {
      throw Error(ErrorKind::kInvalidArgument, "dft: shifts must lie in (-pi, pi]");
    }
  }
  if (s.size() > 1) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] - s[i - 1] > 1e-12) h = std::min(h, s[i] - s[i - 1]);
    }
    for (double x : s) {
      const double k = (x - s.front()) / h;
      if (std::abs(k - std::round(k)) > 1e-6) {
        throw Error(ErrorKind::kInvalidArgument, "dft: shifts are not on a uniform grid");
      }
    }
  }
  std::vector<std::complex<double>> out(static_cast<std::size_t>(max_harmonic) + 1);
  for (int n = 0; n <= max_harmonic; ++n) {
    std::complex<double> acc = 0.0;
    for (std::size_t p = 0; p < s.size(); ++p) {
      acc += full.coefficients[p] * std::polar(1.0, n * s[p]);
    }
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

}  // namespace overshift
