#include "overshift/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "overshift/analytic.hpp"
#include "overshift/errors.hpp"
#include "overshift/special.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Streams {
  Rng shifts;
  Rng measurements;
};

// Both streams hang off one draw of the caller's generator, so the caller's
// state advances by exactly one step per estimate.
Streams derive_streams(Rng& rng) {
  const std::uint64_t base = rng();
  return {Rng(base, 0), Rng(base, 1)};
}

class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  long count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : kInf;
  }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double stderr_of(const RunningStats& s, long min_count) {
  if (s.count() < min_count) return kInf;
  return std::sqrt(s.sample_variance() / static_cast<double>(s.count()));
}

void require_shots(long shots, long minimum, bool even) {
  if (shots < minimum) {
    throw Error(ErrorKind::kInsufficientShots,
                "need at least " + std::to_string(minimum) + " shots, got " +
                    std::to_string(shots));
  }
  if (even && shots % 2 != 0) {
    throw Error(ErrorKind::kInvalidArgument, "paired estimators need an even shot count");
  }
}

void check_weight(double weight, double bound, const char* method) {
  if (std::abs(weight) > bound * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kBrokenInvariant,
                std::string(method) + ": importance weight exceeds its bound");
  }
}

constexpr long kTriangleCache = 10000;

// tail[t] = P(T >= t) = 2 psi_1(t + 1/2) / pi^2.
double triangle_tail(long t) {
  return 2.0 * trigamma(static_cast<double>(t) + 0.5) / (kPi * kPi);
}

const std::vector<double>& triangle_tail_cache() {
  static const std::vector<double> cache = [] {
    std::vector<double> c(kTriangleCache + 1);
    c[0] = 1.0;
    for (long t = 1; t <= kTriangleCache; ++t) c[static_cast<std::size_t>(t)] = triangle_tail(t);
    return c;
  }();
  return cache;
}

}  // namespace

long ShotPlan::total() const { return std::accumulate(shots.begin(), shots.end(), 0L); }

long triangle_term(double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "triangle_term: u must lie in [0, 1)");
  }
  // Find t with tail(t+1) < v <= tail(t), v = 1 - u, i.e. q_{t-1} <= u < q_t
  // for the partial sums q.
  const double v = 1.0 - u;
  const auto& tail = triangle_tail_cache();
  if (v > tail.back()) {
    long lo = 0;  // tail[lo] >= v
    long hi = kTriangleCache;  // tail[hi] < v
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (tail[static_cast<std::size_t>(mid)] >= v) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }
  long lo = kTriangleCache;  // tail(lo) >= v
  long hi = 2 * kTriangleCache;
  while (triangle_tail(hi) >= v) {
    lo = hi;
    if (hi > (std::numeric_limits<long>::max() >> 2)) {
      throw Error(ErrorKind::kNumericFailure, "triangle_term: tail search overflow");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (triangle_tail(mid) >= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

StochasticRule triangle_stochastic_rule(double bandwidth) {
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::kInvalidArgument, "bandwidth must be > 0");
  StochasticRule rule;
  rule.total_mass = bandwidth;
  rule.weight_bound = bandwidth;
  rule.method = "triangle";
  rule.draw = [bandwidth](Rng& rng) {
    const long t = triangle_term(rng.uniform());
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    const double shift = sign * kPi * (2.0 * static_cast<double>(t) + 1.0) / (2.0 * bandwidth);
    const double weight = (t % 2 == 0 ? 1.0 : -1.0) * sign * bandwidth;
    return ShiftDraw{shift, weight};
  };
  return rule;
}

StochasticRule zigzag_stochastic_rule(double bandwidth) {
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::kInvalidArgument, "bandwidth must be > 0");
  StochasticRule rule;
  rule.total_mass = 2.0 * bandwidth;
  rule.weight_bound = 2.0 * bandwidth;
  rule.method = "zigzag";
  rule.draw = [bandwidth](Rng& rng) {
    const double s = zigzag_inverse_cdf(rng.uniform(), bandwidth);
    return ShiftDraw{s, 2.0 * bandwidth * std::sin(bandwidth * s)};
  };
  return rule;
}

StochasticRule discrete_stochastic_rule(const ShiftRule& rule) {
  const ShiftRule full = rule.expanded();
  const double norm = full.l1_norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::kInvalidRule, "discrete rule has zero norm");
  std::vector<double> p;
  for (double c : full.coefficients) p.push_back(std::abs(c) / norm);
  StochasticRule out;
  out.total_mass = norm;
  out.weight_bound = norm;
  out.method = "discrete";
  out.draw = [full, p, norm](Rng& rng) {
    const std::size_t i = sample_discrete(p, rng.uniform());
    return ShiftDraw{full.shifts[i], full.coefficients[i] > 0 ? norm : -norm};
  };
  return out;
}

std::size_t sample_discrete(const std::vector<double>& p, double u) {
  if (p.empty()) throw Error(ErrorKind::kInvalidArgument, "sample_discrete: empty distribution");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::kInvalidArgument, "sample_discrete: negative or non-finite mass");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "sample_discrete: probabilities do not sum to 1");
  }
  if (!(u >= 0.0 && u < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sample_discrete: u must lie in [0, 1)");
  }
  double cum = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    cum += p[t];
    if (u < cum) return t;
  }
  // Rounding left u above the last partial sum: take the last positive entry.
  for (std::size_t t = p.size(); t-- > 0;) {
    if (p[t] > 0.0) return t;
  }
  return p.size() - 1;
}

double sample_inverse_cdf(const std::function<double(double)>& cdf, double u, double lo,
                          double hi) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sample_inverse_cdf: u must lie in [0, 1]");
  }
  if (!(lo < hi)) throw Error(ErrorKind::kInvalidArgument, "sample_inverse_cdf: empty bracket");
  constexpr double kTol = 1e-10;
  int doublings = 0;
  while (cdf(lo) > u) {
    if (++doublings > 200) {
      throw Error(ErrorKind::kNumericFailure, "sample_inverse_cdf: bracket expansion failed");
    }
    lo -= (hi - lo);
  }
  while (cdf(hi) < u) {
    if (++doublings > 200) {
      throw Error(ErrorKind::kNumericFailure, "sample_inverse_cdf: bracket expansion failed");
    }
    hi += (hi - lo);
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = cdf(mid);
    if (std::abs(fm - u) < kTol || mid == lo || mid == hi) return mid;
    if (fm < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SignedSplit split_signed(const ShiftRule& rule) {
  const ShiftRule full = rule.expanded();
  SignedSplit out;
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < full.shifts.size(); ++i) {
    const double c = full.coefficients[i];
    if (c > 0.0) {
      out.plus_shifts.push_back(full.shifts[i]);
      out.plus_probs.push_back(c);
      plus += c;
    } else if (c < 0.0) {
      out.minus_shifts.push_back(full.shifts[i]);
      out.minus_probs.push_back(-c);
      minus -= c;
    }
  }
  out.l1_norm = plus + minus;
  if (!(out.l1_norm > 0.0)) throw Error(ErrorKind::kInvalidRule, "split_signed: zero rule");
  if (std::abs(plus - minus) > 1e-8 * out.l1_norm) {
    throw Error(ErrorKind::kInvalidRule,
                "split_signed: positive and negative masses differ (rule not exact at w = 0)");
  }
  for (double& p : out.plus_probs) p /= plus;
  for (double& p : out.minus_probs) p /= minus;
  return out;
}

GradientEstimate stochastic_estimate(const SignedSplit& split, const MeasurementModel& m,
                                     double theta, long shots, Rng& rng) {
  require_shots(shots, 2, true);
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  const double half = 0.5 * split.l1_norm;
  RunningStats stats;
  for (long k = 0; k < shots / 2; ++k) {
    const double sp = split.plus_shifts[sample_discrete(split.plus_probs, st.shifts.uniform())];
    const double sm =
        split.minus_shifts[sample_discrete(split.minus_probs, st.shifts.uniform())];
    const double gp = m.outcome(f.eval(theta + sp), st.measurements.uniform_at(2 * k));
    const double gm = m.outcome(f.eval(theta + sm), st.measurements.uniform_at(2 * k + 1));
    stats.add(half * (gp - gm));
  }
  GradientEstimate e;
  e.mean = stats.mean();
  e.std_error = stderr_of(stats, 2);
  e.shots = shots;
  e.method = "stochastic";
  e.seed = seed;
  e.max_abs_weight = half;
  return e;
}

std::vector<ShiftGroup> group_shifts(const std::vector<ShiftDraw>& samples) {
  std::vector<ShiftGroup> groups;
  std::map<std::pair<double, double>, std::size_t> index;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto key = std::make_pair(samples[i].shift, samples[i].weight);
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({samples[i].shift, samples[i].weight, {}});
    groups[it->second].members.push_back(i);
  }
  return groups;
}

GradientEstimate single_draw_estimate(const StochasticRule& rule, const MeasurementModel& m,
                                      double theta, long shots, Rng& rng, bool group) {
  require_shots(shots, 1, false);
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  GradientEstimate e;
  e.shots = shots;
  e.method = rule.method;
  e.seed = seed;
  RunningStats stats;
  if (!group) {
    for (long j = 0; j < shots; ++j) {
      const ShiftDraw d = rule.draw(st.shifts);
      check_weight(d.weight, rule.weight_bound, rule.method.c_str());
      e.max_abs_weight = std::max(e.max_abs_weight, std::abs(d.weight));
      const double g = m.outcome(f.eval(theta + d.shift), st.measurements.uniform_at(j));
      stats.add(d.weight * g);
    }
    e.mean = stats.mean();
  } else {
    std::vector<ShiftDraw> draws;
    draws.reserve(static_cast<std::size_t>(shots));
    for (long j = 0; j < shots; ++j) draws.push_back(rule.draw(st.shifts));
    double mean = 0.0;
    for (const ShiftGroup& grp : group_shifts(draws)) {
      check_weight(grp.weight, rule.weight_bound, rule.method.c_str());
      e.max_abs_weight = std::max(e.max_abs_weight, std::abs(grp.weight));
      const double value = f.eval(theta + grp.shift);
      double sum = 0.0;
      for (std::size_t j : grp.members) {
        const double g = m.outcome(value, st.measurements.uniform_at(j));
        sum += g;
        stats.add(grp.weight * g);
      }
      const double mi = static_cast<double>(grp.members.size());
      mean += (mi / static_cast<double>(shots)) * grp.weight * (sum / mi);
    }
    e.mean = mean;
  }
  e.std_error = stderr_of(stats, 2);
  return e;
}

GradientEstimate triangle_estimate(double bandwidth, const MeasurementModel& m, double theta,
                                   long shots, Rng& rng, bool group) {
  return single_draw_estimate(triangle_stochastic_rule(bandwidth), m, theta, shots, rng, group);
}

GradientEstimate zigzag_estimate(double bandwidth, const MeasurementModel& m, double theta,
                                 long shots, Rng& rng) {
  return single_draw_estimate(zigzag_stochastic_rule(bandwidth), m, theta, shots, rng, false);
}

double default_lambda_floor(const KernelWeights& weights) {
  const double scale = weights.spec.family == KernelFamily::kCauchy ? 1.0 / weights.spec.width
                                                                    : weights.spec.width;
  double peak = 0.0;
  constexpr int kProbe = 2000;
  for (int i = 0; i <= kProbe; ++i) {
    const double s = scale * (-4.0 + 8.0 * i / kProbe);
    peak = std::max(peak, std::abs(kernel_lambda(weights, s)));
  }
  return 1e-8 * peak;
}

GradientEstimate kernel_estimate(const KernelWeights& weights, const MeasurementModel& m,
                                 double theta, long shots, Rng& rng, double lambda_floor) {
  require_shots(shots, 1, false);
  const double floor = lambda_floor < 0.0 ? default_lambda_floor(weights) : lambda_floor;
  double bound = 0.0;
  const auto& w = weights.omega.frequencies();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) bound += 2.0 * std::abs(weights.y[i]);
  }
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  GradientEstimate e;
  e.shots = shots;
  e.method = std::string("kernel:") + to_string(weights.spec.family);
  e.seed = seed;
  RunningStats stats;
  long accepted = 0;
  long attempts = 0;
  while (accepted < shots) {
    ++attempts;
    if (attempts >= 1000 && e.discarded > 0.99 * static_cast<double>(attempts)) {
      throw Error(ErrorKind::kDegenerateRule, "kernel_estimate: more than 99% of draws discarded");
    }
    const double s = kernel_sample(weights.spec, st.shifts);
    const double lam = kernel_lambda(weights, s);
    if (std::abs(lam) < floor) {
      ++e.discarded;
      continue;
    }
    check_weight(lam, bound, "kernel");
    e.max_abs_weight = std::max(e.max_abs_weight, std::abs(lam));
    const double g = m.outcome(f.eval(theta + s), st.measurements.uniform_at(accepted));
    stats.add(lam * g);
    ++accepted;
  }
  e.mean = stats.mean();
  e.std_error = stderr_of(stats, 2);
  return e;
}

GradientEstimate kernel_estimate(const KernelSpec& spec, const FrequencySet& omega,
                                 const MeasurementModel& m, double theta, long shots,
                                 Rng& rng, double lambda_floor) {
  return kernel_estimate(kernel_weights(omega, spec), m, theta, shots, rng, lambda_floor);
}

GradientEstimate equispaced_stochastic_estimate(int n, const MeasurementModel& m,
                                                double theta, long shots, Rng& rng) {
  require_shots(shots, 2, true);
  const std::vector<double> p = equispaced_probabilities(n);
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  const double half = 0.5 * n;
  RunningStats stats;
  for (long k = 0; k < shots / 2; ++k) {
    const std::size_t t = sample_discrete(p, st.shifts.uniform());
    const double s = kPi * (2.0 * static_cast<double>(t) + 1.0) / (2.0 * n);
    const double gp = m.outcome(f.eval(theta + s), st.measurements.uniform_at(2 * k));
    const double gm = m.outcome(f.eval(theta - s), st.measurements.uniform_at(2 * k + 1));
    stats.add((t % 2 == 0 ? half : -half) * (gp - gm));
  }
  GradientEstimate e;
  e.mean = stats.mean();
  e.std_error = stderr_of(stats, 2);
  e.shots = shots;
  e.method = "equispaced-stochastic";
  e.seed = seed;
  e.max_abs_weight = half;
  return e;
}

namespace {

// Largest-remainder rounding of shots * weight_p / sum(weight) with a floor of
// one shot for every nonzero coefficient.
ShotPlan allocate_by_weight(const ShiftRule& full, const std::vector<double>& weight,
                            long shots) {
  ShotPlan plan;
  plan.shifts = full.shifts;
  plan.coefficients = full.coefficients;
  plan.shots.assign(full.shifts.size(), 0);
  std::vector<std::size_t> nz;
  double norm = 0.0;
  for (std::size_t i = 0; i < full.coefficients.size(); ++i) {
    if (full.coefficients[i] != 0.0) {
      nz.push_back(i);
      norm += weight[i];
    }
  }
  if (nz.empty()) throw Error(ErrorKind::kInvalidRule, "rule has no nonzero coefficient");
  if (shots < static_cast<long>(nz.size())) {
    throw Error(ErrorKind::kInsufficientShots,
                std::to_string(shots) + " shots cannot cover " + std::to_string(nz.size()) +
                    " nonzero coefficients");
  }
  std::vector<double> rem(full.shifts.size(), -1.0);
  long total = 0;
  for (std::size_t i : nz) {
    const double ideal = norm > 0.0 ? static_cast<double>(shots) * weight[i] / norm
                                    : static_cast<double>(shots) / nz.size();
    const double fl = std::floor(ideal);
    plan.shots[i] = std::max(1L, static_cast<long>(fl));
    rem[i] = fl >= 1.0 ? ideal - fl : -1.0;
    total += plan.shots[i];
  }
  std::vector<std::size_t> order = nz;
  if (total < shots) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; total < shots; k = (k + 1) % order.size()) {
      ++plan.shots[order[k]];
      ++total;
    }
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] < rem[b]; });
    while (total > shots) {
      bool moved = false;
      for (std::size_t i : order) {
        if (total == shots) break;
        if (plan.shots[i] > 1) {
          --plan.shots[i];
          --total;
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  return plan;
}

}  // namespace

ShotPlan allocate_shots(const ShiftRule& rule, long shots) {
  const ShiftRule full = rule.expanded();
  std::vector<double> weight;
  for (double c : full.coefficients) weight.push_back(std::abs(c));
  return allocate_by_weight(full, weight, shots);
}

ShotPlan uniform_plan(const ShiftRule& rule, long shots) {
  const ShiftRule full = rule.expanded();
  ShotPlan plan;
  plan.shifts = full.shifts;
  plan.coefficients = full.coefficients;
  plan.shots.assign(full.shifts.size(), 0);
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < full.coefficients.size(); ++i) {
    if (full.coefficients[i] != 0.0) nz.push_back(i);
  }
  if (nz.empty()) throw Error(ErrorKind::kInvalidRule, "rule has no nonzero coefficient");
  if (shots < static_cast<long>(nz.size())) {
    throw Error(ErrorKind::kInsufficientShots, "uniform plan needs one shot per nonzero");
  }
  const long base = shots / static_cast<long>(nz.size());
  long extra = shots - base * static_cast<long>(nz.size());
  for (std::size_t i : nz) plan.shots[i] = base + (extra-- > 0 ? 1 : 0);
  return plan;
}

GradientEstimate deterministic_estimate(const ShiftRule& rule, const MeasurementModel& m,
                                        double theta, const ShotPlan& plan, Rng& rng) {
  const ShiftRule full = rule.expanded();
  if (plan.shots.size() != full.shifts.size() || plan.shifts != full.shifts) {
    throw Error(ErrorKind::kInvalidArgument, "shot plan does not match the rule");
  }
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  const double sigma2 = m.noiseless() ? 0.0 : m.variance_bound();
  GradientEstimate e;
  e.method = std::string("deterministic:") + to_string(rule.source);
  e.seed = seed;
  double var = 0.0;
  long counter = 0;
  for (std::size_t p = 0; p < full.shifts.size(); ++p) {
    const double c = full.coefficients[p];
    const long sp = plan.shots[p];
    if (c == 0.0) {
      counter += sp;
      continue;
    }
    if (sp <= 0) {
      throw Error(ErrorKind::kInsufficientShots,
                  "a nonzero coefficient received no shots; the estimate would be biased");
    }
    const double value = f.eval(theta + full.shifts[p]);
    RunningStats s;
    for (long k = 0; k < sp; ++k) s.add(m.outcome(value, st.measurements.uniform_at(counter++)));
    e.mean += c * s.mean();
    const double vp = sp >= 2 ? s.sample_variance() : sigma2;
    var += c * c * vp / static_cast<double>(sp);
    e.max_abs_weight = std::max(e.max_abs_weight, std::abs(c));
  }
  e.shots = plan.total();
  e.std_error = std::sqrt(var);
  e.plan = plan;
  return e;
}

GradientEstimate two_stage_estimate(const StochasticRule& rule, const MeasurementModel& m,
                                    double theta, long n, long m_shots, Rng& rng) {
  require_shots(n, 1, false);
  require_shots(m_shots, 1, false);
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  RunningStats stats;
  GradientEstimate e;
  long counter = 0;
  for (long i = 0; i < n; ++i) {
    const ShiftDraw d = rule.draw(st.shifts);
    check_weight(d.weight, rule.weight_bound, rule.method.c_str());
    e.max_abs_weight = std::max(e.max_abs_weight, std::abs(d.weight));
    const double value = f.eval(theta + d.shift);
    double sum = 0.0;
    for (long k = 0; k < m_shots; ++k) sum += m.outcome(value, st.measurements.uniform_at(counter++));
    stats.add(d.weight * sum / static_cast<double>(m_shots));
  }
  e.mean = stats.mean();
  e.std_error = stderr_of(stats, 2);
  e.shots = n * m_shots;
  e.method = rule.method + ":two-stage";
  e.seed = seed;
  return e;
}

GradientEstimate pilot_estimate(const ShiftRule& rule, const MeasurementModel& m,
                                double theta, long shots, long pilot_shots, Rng& rng) {
  const ShiftRule full = rule.expanded();
  const ShotPlan pilot = uniform_plan(rule, pilot_shots);
  const long nz = static_cast<long>(
      std::count_if(full.coefficients.begin(), full.coefficients.end(),
                    [](double c) { return c != 0.0; }));
  require_shots(shots - pilot_shots, nz, false);
  const std::uint64_t seed = rng.seed();
  Streams st = derive_streams(rng);
  const auto& f = m.function();
  std::vector<double> values(full.shifts.size(), 0.0);
  std::vector<double> weight(full.shifts.size(), 0.0);
  long counter = 0;
  // Pilot pass: only the allocation depends on these shots, so the final
  // mean stays unbiased.
  for (std::size_t p = 0; p < full.shifts.size(); ++p) {
    if (full.coefficients[p] == 0.0) continue;
    values[p] = f.eval(theta + full.shifts[p]);
    RunningStats s;
    for (long k = 0; k < pilot.shots[p]; ++k) {
      s.add(m.outcome(values[p], st.measurements.uniform_at(counter++)));
    }
    const double sd = pilot.shots[p] >= 2 ? std::sqrt(s.sample_variance()) : m.amplitude();
    // Keep a small floor so a zero pilot variance does not starve a shift.
    weight[p] = std::abs(full.coefficients[p]) * std::max(sd, 1e-3 * m.amplitude());
  }
  const ShotPlan plan = allocate_by_weight(full, weight, shots - pilot_shots);
  GradientEstimate e;
  e.method = std::string("pilot:") + to_string(rule.source);
  e.seed = seed;
  double var = 0.0;
  const double sigma2 = m.noiseless() ? 0.0 : m.variance_bound();
  for (std::size_t p = 0; p < full.shifts.size(); ++p) {
    const double c = full.coefficients[p];
    if (c == 0.0) continue;
    RunningStats s;
    for (long k = 0; k < plan.shots[p]; ++k) {
      s.add(m.outcome(values[p], st.measurements.uniform_at(counter++)));
    }
    e.mean += c * s.mean();
    const double vp = plan.shots[p] >= 2 ? s.sample_variance() : sigma2;
    var += c * c * vp / static_cast<double>(plan.shots[p]);
    e.max_abs_weight = std::max(e.max_abs_weight, std::abs(c));
  }
  e.shots = shots;
  e.std_error = std::sqrt(var);
  e.plan = plan;
  return e;
}

}  // namespace overshift
