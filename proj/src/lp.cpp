#include "overshift/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "overshift/errors.hpp"

namespace overshift {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dense tableau simplex for min c'y, A y = b, y >= 0.
class Simplex {
 public:
  Simplex(const MatrixXd& a, const VectorXd& b, const VectorXd& c, const LpOptions& opt)
      : a_(a), b_(b), c_(c), opt_(opt), m_(a.rows()), n_(a.cols()) {
    max_iter_ = opt.max_iterations > 0 ? opt.max_iterations : 50 * (m_ + n_) + 1000;
  }

  LpStatus run() {
    build_phase1();
    iterate(false);
    const double infeas = -t_(rows(), rhs_col());
    if (infeas > opt_.feasibility_tolerance * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) {
      return LpStatus::kInfeasible;
    }
    drive_out_artificials();
    build_phase2_objective();
    for (int round = 0;; ++round) {
      if (!iterate(true)) return LpStatus::kUnbounded;
      if (certify()) return LpStatus::kOptimal;
      if (round >= 5) {
        throw Error(ErrorKind::kNumericFailure,
                    "simplex: reduced costs fail certification after refactorization");
      }
      refactorize();
    }
  }

  VectorXd solution() const {
    VectorXd y = VectorXd::Zero(n_);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] < n_) y(basis_[i]) = x_basic_(static_cast<Index>(i));
    }
    return y;
  }
  long iterations() const { return iterations_; }
  double dual_violation() const { return dual_violation_; }

 private:
  Index rows() const { return static_cast<Index>(basis_.size()); }
  Index rhs_col() const { return t_.cols() - 1; }

  void build_phase1() {
    t_.setZero(m_ + 1, n_ + m_ + 1);
    basis_.resize(static_cast<std::size_t>(m_));
    kept_rows_.resize(static_cast<std::size_t>(m_));
    row_sign_.resize(m_);
    for (Index i = 0; i < m_; ++i) {
      row_sign_(i) = b_(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = row_sign_(i) * a_.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs_col()) = row_sign_(i) * b_(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      kept_rows_[static_cast<std::size_t>(i)] = i;
    }
    for (Index j = 0; j < n_; ++j) t_(m_, j) = -t_.col(j).head(m_).sum();
    t_(m_, rhs_col()) = -t_.col(rhs_col()).head(m_).sum();
  }

  void pivot(Index r, Index q) {
    const Index obj = rows();
    const double piv = t_(r, q);
    t_.row(r) /= piv;
    const Eigen::RowVectorXd prow = t_.row(r);
    for (Index i = 0; i <= obj; ++i) {
      if (i == r) continue;
      const double f = t_(i, q);
      if (f != 0.0) t_.row(i) -= f * prow;
    }
    t_(r, q) = 1.0;
    basis_[static_cast<std::size_t>(r)] = q;
    ++iterations_;
    if (iterations_ > max_iter_) {
      throw Error(ErrorKind::kNumericFailure,
                  "simplex: iteration guard exceeded (" + std::to_string(max_iter_) + ")");
    }
  }

  Index choose_entering(bool degenerate_streak, const std::vector<char>& blocked) const {
    const Index obj = rows();
    const bool bland = opt_.pricing == Pricing::kBland || degenerate_streak;
    Index best = -1;
    double best_d = -opt_.cost_tolerance;
    for (Index j = 0; j < n_; ++j) {
      if (blocked[static_cast<std::size_t>(j)]) continue;
      const double d = t_(obj, j);
      if (d < best_d) {
        best = j;
        if (bland) break;
        best_d = d;
      }
    }
    return best;
  }

  // Returns false when the problem is unbounded along an entering column.
  bool iterate(bool phase2) {
    int degenerate = 0;
    // Columns whose only positive entries sit below the pivot tolerance are
    // numerically flat; they are skipped until the next pivot.
    std::vector<char> blocked(static_cast<std::size_t>(n_), 0);
    bool any_blocked = false;
    long since_refresh = 0;
    const double feas_scale =
        opt_.feasibility_tolerance * 1e-3 * std::max(1.0, b_.lpNorm<Eigen::Infinity>());
    for (;;) {
      if (!phase2 && -t_(rows(), rhs_col()) <= feas_scale) return true;
      const bool bland = opt_.pricing == Pricing::kBland || degenerate > 50;
      const Index q = choose_entering(bland, blocked);
      if (q < 0) return true;
      Index r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows(); ++i) {
        const double aiq = t_(i, q);
        if (aiq <= opt_.pivot_tolerance) continue;
        const double ratio = std::max(0.0, t_(i, rhs_col())) / aiq;
        const double eps = 1e-12 * std::max(1.0, std::abs(best));
        if (r < 0 || ratio < best - eps) {
          best = ratio;
          r = i;
        } else if (ratio <= best + eps) {
          // Ties go to the larger pivot, or to the lower index under Bland.
          const bool take = bland ? basis_[static_cast<std::size_t>(i)] <
                                        basis_[static_cast<std::size_t>(r)]
                                  : aiq > t_(r, q);
          if (take) r = i;
        }
      }
      if (r < 0) {
        // Phase 1 is bounded below, and a reduced cost that is small next to
        // its column is rounding noise; neither signals a real ray.
        const double colmax = t_.col(q).head(rows()).cwiseAbs().maxCoeff();
        if (!phase2 || t_(rows(), q) > -opt_.certify_tolerance * std::max(1.0, colmax)) {
          blocked[static_cast<std::size_t>(q)] = 1;
          any_blocked = true;
          continue;
        }
        // A ray seen in an accumulated tableau is confirmed on a fresh one.
        if (since_refresh > 0) {
          refresh();
          since_refresh = 0;
          continue;
        }
        return false;
      }
      degenerate = best <= 1e-12 ? degenerate + 1 : 0;
      pivot(r, q);
      ++since_refresh;
      if (phase2 && since_refresh >= kRefreshInterval) {
        refresh();
        since_refresh = 0;
      }
      if (any_blocked) {
        std::fill(blocked.begin(), blocked.end(), 0);
        any_blocked = false;
      }
    }
  }

  void drive_out_artificials() {
    std::vector<Index> drop;
    for (Index i = 0; i < rows(); ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Index best = -1;
      double mag = opt_.pivot_tolerance;
      for (Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
      } else {
        drop.push_back(i);
      }
    }
    if (drop.empty()) return;
    // Redundant constraint rows: remove them from the tableau.
    MatrixXd kept(t_.rows() - static_cast<Index>(drop.size()), t_.cols());
    std::vector<Index> basis;
    std::vector<Index> kept_rows;
    Index k = 0;
    for (Index i = 0; i <= rows(); ++i) {
      if (std::find(drop.begin(), drop.end(), i) != drop.end()) continue;
      kept.row(k++) = t_.row(i);
      if (i < rows()) {
        basis.push_back(basis_[static_cast<std::size_t>(i)]);
        kept_rows.push_back(kept_rows_[static_cast<std::size_t>(i)]);
      }
    }
    t_ = std::move(kept);
    basis_ = std::move(basis);
    kept_rows_ = std::move(kept_rows);
  }

  void build_phase2_objective() {
    const Index obj = rows();
    t_.row(obj).setZero();
    t_.row(obj).head(n_) = c_.transpose();
    for (Index i = 0; i < rows(); ++i) {
      const Index bi = basis_[static_cast<std::size_t>(i)];
      const double cb = bi < n_ ? c_(bi) : 0.0;
      if (cb != 0.0) t_.row(obj) -= cb * t_.row(i);
    }
    // Artificial columns never re-enter.
    t_.row(obj).segment(n_, m_).setZero();
  }

  MatrixXd kept_a() const {
    MatrixXd out(rows(), n_);
    for (Index i = 0; i < rows(); ++i) {
      const Index src = kept_rows_[static_cast<std::size_t>(i)];
      out.row(i) = row_sign_(src) * a_.row(src);
    }
    return out;
  }

  VectorXd kept_b() const {
    VectorXd out(rows());
    for (Index i = 0; i < rows(); ++i) {
      const Index src = kept_rows_[static_cast<std::size_t>(i)];
      out(i) = row_sign_(src) * b_(src);
    }
    return out;
  }

  // Recomputes the basic solution and the duals from the original data.
  bool certify() {
    const Index mr = rows();
    const MatrixXd ak = kept_a();
    const VectorXd bk = kept_b();
    if (mr == 0) {
      x_basic_.resize(0);
      dual_violation_ = std::min(0.0, c_.size() ? c_.minCoeff() : 0.0);
      return dual_violation_ >= -opt_.certify_tolerance;
    }
    MatrixXd bmat(mr, mr);
    VectorXd cb(mr);
    for (Index i = 0; i < mr; ++i) {
      const Index bi = basis_[static_cast<std::size_t>(i)];
      if (bi >= n_) {
        throw Error(ErrorKind::kNumericFailure, "simplex: artificial left in final basis");
      }
      bmat.col(i) = ak.col(bi);
      cb(i) = c_(bi);
    }
    lu_.compute(bmat);
    x_basic_ = lu_.solve(bk);
    const VectorXd y = lu_.transpose().solve(cb);
    const VectorXd d = c_ - ak.transpose() * y;
    dual_violation_ = std::min(0.0, d.size() ? d.minCoeff() : 0.0);
    // Reduced costs carry cancellation error of a few ulps of
    // |c_j| + |y|'|a_j|; large duals from ill-conditioned bases need that slack.
    const VectorXd mag = c_.cwiseAbs() + ak.cwiseAbs().transpose() * y.cwiseAbs();
    bool dual_ok = true;
    for (Index j = 0; j < d.size(); ++j) {
      const double slack = opt_.certify_tolerance + 8.0 * kEps * mag(j);
      if (d(j) < -slack) dual_ok = false;
    }
    const double scale = std::max(1.0, bk.lpNorm<Eigen::Infinity>());
    const double xmin = x_basic_.size() ? x_basic_.minCoeff() : 0.0;
    if (xmin < -1e-7 * scale) {
      throw Error(ErrorKind::kNumericFailure, "simplex: refactorized basis is primal infeasible");
    }
    x_basic_ = x_basic_.cwiseMax(0.0);
    return dual_ok;
  }

  // Rebuilds the tableau from the original data for the current basis.
  void refresh() {
    const Index mr = rows();
    const MatrixXd ak = kept_a();
    MatrixXd bmat(mr, mr);
    for (Index i = 0; i < mr; ++i) bmat.col(i) = ak.col(basis_[static_cast<std::size_t>(i)]);
    lu_.compute(bmat);
    x_basic_ = lu_.solve(kept_b()).cwiseMax(0.0);
    refactorize();
  }

  void refactorize() {
    const MatrixXd ak = kept_a();
    const Index mr = rows();
    MatrixXd fresh = MatrixXd::Zero(mr + 1, t_.cols());
    fresh.topLeftCorner(mr, n_) = lu_.solve(ak);
    fresh.col(fresh.cols() - 1).head(mr) = x_basic_;
    t_ = std::move(fresh);
    build_phase2_objective();
  }

  const MatrixXd& a_;
  const VectorXd& b_;
  const VectorXd& c_;
  const LpOptions& opt_;
  Index m_;
  Index n_;
  long max_iter_;
  long iterations_ = 0;
  static constexpr long kRefreshInterval = 200;
  MatrixXd t_;
  std::vector<Index> basis_;
  std::vector<Index> kept_rows_;
  VectorXd row_sign_;
  VectorXd x_basic_;
  Eigen::PartialPivLU<MatrixXd> lu_;
  double dual_violation_ = 0.0;
};

// How an original variable maps onto nonnegative standard-form columns:
// x = base + sign * y[col] (- y[minus] for free variables).
struct VarMap {
  double base = 0.0;
  double sign = 1.0;
  Index col = -1;
  Index minus = -1;
};

}  // namespace

LpResult lp_solve(const VectorXd& cost, const MatrixXd& eq_matrix, const VectorXd& eq_rhs,
                  const VectorXd& lower, const VectorXd& upper, const LpOptions& options) {
  const Index n = eq_matrix.cols();
  const Index m = eq_matrix.rows();
  if (cost.size() != n || eq_rhs.size() != m || lower.size() != n || upper.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "lp_solve: inconsistent dimensions");
  }
  LpResult result;
  std::vector<VarMap> map(static_cast<std::size_t>(n));
  Index cols = 0;
  Index extra_rows = 0;
  for (Index j = 0; j < n; ++j) {
    const double l = lower(j);
    const double u = upper(j);
    if (std::isnan(l) || std::isnan(u)) {
      throw Error(ErrorKind::kInvalidArgument, "lp_solve: NaN bound");
    }
    if (l > u) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    VarMap& v = map[static_cast<std::size_t>(j)];
    if (std::isfinite(l)) {
      v.base = l;
      v.col = cols++;
      if (std::isfinite(u)) ++extra_rows;
    } else if (std::isfinite(u)) {
      v.base = u;
      v.sign = -1.0;
      v.col = cols++;
    } else {
      v.col = cols++;
      v.minus = cols++;
    }
  }
  const Index box_slacks = extra_rows;
  const Index ns = cols + box_slacks;
  const Index ms = m + extra_rows;
  MatrixXd as = MatrixXd::Zero(ms, ns);
  VectorXd bs(ms);
  VectorXd cs = VectorXd::Zero(ns);
  bs.head(m) = eq_rhs;
  Index box = 0;
  for (Index j = 0; j < n; ++j) {
    const VarMap& v = map[static_cast<std::size_t>(j)];
    as.col(v.col).head(m) = v.sign * eq_matrix.col(j);
    bs.head(m) -= v.base * eq_matrix.col(j);
    cs(v.col) = v.sign * cost(j);
    if (v.minus >= 0) {
      as.col(v.minus).head(m) = -eq_matrix.col(j);
      cs(v.minus) = -cost(j);
    }
    if (std::isfinite(lower(j)) && std::isfinite(upper(j))) {
      as(m + box, v.col) = 1.0;
      as(m + box, cols + box) = 1.0;
      bs(m + box) = upper(j) - lower(j);
      ++box;
    }
  }

  Simplex simplex(as, bs, cs, options);
  result.status = simplex.run();
  result.iterations = simplex.iterations();
  if (result.status != LpStatus::kOptimal) return result;
  const VectorXd y = simplex.solution();
  result.x.resize(n);
  for (Index j = 0; j < n; ++j) {
    const VarMap& v = map[static_cast<std::size_t>(j)];
    double x = v.base + v.sign * y(v.col);
    if (v.minus >= 0) x -= y(v.minus);
    result.x(j) = x;
  }
  result.objective = cost.dot(result.x);
  result.dual_violation = simplex.dual_violation();
  return result;
}

}  // namespace overshift
