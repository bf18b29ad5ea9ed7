#pragma once

#include <cstddef>
#include <vector>

#include "overshift/linsys.hpp"
#include "overshift/spectrum.hpp"

namespace overshift {

// Term t of the triangle-wave rule: shift pi(2t+1)/(2 Lambda) and magnitude
// (4 Lambda/pi^2)(2t+1)^-2. The sign (-1)^t is left to the caller.
struct TriangleTerm {
  double shift;
  double coefficient;
};
TriangleTerm triangle_weight(long t, double bandwidth);

// Probability 8/pi^2 (2t+1)^-2 of drawing term t (both signs together).
double triangle_probability(long t);

// Response of the untruncated triangle rule at frequency w: a triangle wave
// equal to w on [-Lambda, Lambda].
double triangle_response(double omega, double bandwidth);

inline constexpr std::size_t kDefaultTriangleTermCap = 10000000;

// Keeps terms until the discarded coefficient mass is <= tail_tolerance *
// Lambda. Throws size-limit when that needs more than term_cap terms.
ShiftRule triangle_truncated_rule(double bandwidth, double tail_tolerance,
                                  std::size_t term_cap = kDefaultTriangleTermCap);

// Discarded mass of a triangle rule cut after `terms` terms, full form.
double triangle_tail_mass(double bandwidth, std::size_t terms);

double zigzag_density(double shift, double bandwidth);
double zigzag_cdf(double shift, double bandwidth);
// c(s) = p(s) * 2 Lambda sin(Lambda s).
double zigzag_coefficient(double shift, double bandwidth);
double zigzag_inverse_cdf(double u, double bandwidth);

ShiftRule equispaced_rule(int n);
// p_N(t) = 1/(N^2 (1 - cos(pi(2t+1)/(2N)))), t = 0..N-1.
std::vector<double> equispaced_probabilities(int n);

// (8/pi^2) sum_k (2t + 4Nk + 1)^-2 by direct summation plus an
// Euler-Maclaurin tail.
double eta_coefficient(int t, int n);
// Same quantity through the trigamma closed form.
double eta_trigamma(int t, int n);

FrequencySet approx_bandwidth_frequencies(double bandwidth, int l);
// Symmetric system on the positive half of the uniform grid over the
// frequency grid {l Lambda / L}.
LinearSystem approx_bandwidth_system(double bandwidth, int l, int p, double b);

}  // namespace overshift
