#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "overshift/kernel.hpp"
#include "overshift/linsys.hpp"
#include "overshift/rng.hpp"
#include "overshift/specfun.hpp"

namespace overshift {

struct ShiftDraw {
  double shift;
  double weight;
};

// Single-draw sampler: E[weight * f(theta + shift)] = f'(theta).
struct StochasticRule {
  std::function<ShiftDraw(Rng&)> draw;
  double total_mass = 0.0;
  double weight_bound = 0.0;
  std::string method;
};

StochasticRule triangle_stochastic_rule(double bandwidth);
StochasticRule zigzag_stochastic_rule(double bandwidth);
// Draws shift p with probability |c_p| / ||c||_1, weight sign(c_p) ||c||_1.
StochasticRule discrete_stochastic_rule(const ShiftRule& rule);

// Term index of the triangle rule for a uniform variate, with
// P(t) = 8/pi^2 (2t+1)^-2.
long triangle_term(double u);

struct ShotPlan {
  std::vector<double> shifts;        // expanded rule
  std::vector<double> coefficients;  // expanded rule
  std::vector<long> shots;
  long total() const;
};

struct GradientEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long shots = 0;
  std::string method;
  std::uint64_t seed = 0;
  std::optional<ShotPlan> plan;
  double max_abs_weight = 0.0;
  long discarded = 0;
};

// Index t with c_t <= u < c_{t+1} for the cumulative sums c of p.
std::size_t sample_discrete(const std::vector<double>& p, double u);

// Bisection for cdf(s) = u within 1e-10, starting from [lo, hi] and doubling
// the bracket as needed.
double sample_inverse_cdf(const std::function<double(double)>& cdf, double u,
                          double lo = -1.0, double hi = 1.0);

struct SignedSplit {
  std::vector<double> plus_shifts;
  std::vector<double> plus_probs;
  std::vector<double> minus_shifts;
  std::vector<double> minus_probs;
  double l1_norm = 0.0;
};
SignedSplit split_signed(const ShiftRule& rule);

// Paired estimator: S/2 rounds of (g+ - g-) ||c||_1 / 2.
GradientEstimate stochastic_estimate(const SignedSplit& split, const MeasurementModel& m,
                                     double theta, long shots, Rng& rng);

// S single-shot draws of a StochasticRule. With group=true equal shifts are
// evaluated once and their shots batched; the per-shot randomness is shared
// with the ungrouped path so both give the same mean.
GradientEstimate single_draw_estimate(const StochasticRule& rule, const MeasurementModel& m,
                                      double theta, long shots, Rng& rng, bool group = false);

GradientEstimate triangle_estimate(double bandwidth, const MeasurementModel& m, double theta,
                                   long shots, Rng& rng, bool group = false);
GradientEstimate zigzag_estimate(double bandwidth, const MeasurementModel& m, double theta,
                                 long shots, Rng& rng);

// lambda_floor < 0 selects 1e-8 * max|lambda| over a probe grid.
GradientEstimate kernel_estimate(const KernelWeights& weights, const MeasurementModel& m,
                                 double theta, long shots, Rng& rng,
                                 double lambda_floor = -1.0);
GradientEstimate kernel_estimate(const KernelSpec& spec, const FrequencySet& omega,
                                 const MeasurementModel& m, double theta, long shots,
                                 Rng& rng, double lambda_floor = -1.0);
double default_lambda_floor(const KernelWeights& weights);

GradientEstimate equispaced_stochastic_estimate(int n, const MeasurementModel& m,
                                                double theta, long shots, Rng& rng);

ShotPlan allocate_shots(const ShiftRule& rule, long shots);
ShotPlan uniform_plan(const ShiftRule& rule, long shots);
GradientEstimate deterministic_estimate(const ShiftRule& rule, const MeasurementModel& m,
                                        double theta, const ShotPlan& plan, Rng& rng);

// Experimental two-pass allocation: pilot_shots spread uniformly estimate the
// per-shift outcome deviation sd_p, then the remaining shots go out in
// proportion to |c_p| sd_p. The mean uses the second pass only.
GradientEstimate pilot_estimate(const ShiftRule& rule, const MeasurementModel& m,
                                double theta, long shots, long pilot_shots, Rng& rng);

struct ShiftGroup {
  double shift;
  double weight;
  std::vector<std::size_t> members;  // indices into the draw sequence
};
std::vector<ShiftGroup> group_shifts(const std::vector<ShiftDraw>& samples);

// n shift samples, each measured m_shots times.
GradientEstimate two_stage_estimate(const StochasticRule& rule, const MeasurementModel& m,
                                    double theta, long n, long m_shots, Rng& rng);

}  // namespace overshift
