#include "overshift/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "overshift/errors.hpp"
#include "overshift/special.hpp"
#include "overshift/stochastic.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;

void require_bandwidth(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorKind::kInvalidArgument, "bandwidth must be finite and > 0");
  }
}

}  // namespace

TriangleTerm triangle_weight(long t, double bandwidth) {
  require_bandwidth(bandwidth);
  if (t < 0) throw Error(ErrorKind::kInvalidArgument, "triangle term index must be >= 0");
  const double odd = 2.0 * static_cast<double>(t) + 1.0;
  return {kPi * odd / (2.0 * bandwidth), 4.0 * bandwidth / (kPi * kPi) / (odd * odd)};
}

double triangle_probability(long t) {
  const double odd = 2.0 * static_cast<double>(t) + 1.0;
  return 8.0 / (kPi * kPi) / (odd * odd);
}

double triangle_response(double omega, double bandwidth) {
  require_bandwidth(bandwidth);
  return 2.0 * bandwidth / kPi * std::asin(std::sin(kPi * omega / (2.0 * bandwidth)));
}

double triangle_tail_mass(double bandwidth, std::size_t terms) {
  // sum_{t >= T} (2t+1)^-2 = psi_1(T + 1/2) / 4
  return 2.0 * bandwidth * trigamma(static_cast<double>(terms) + 0.5) / (kPi * kPi);
}

ShiftRule triangle_truncated_rule(double bandwidth, double tail_tolerance,
                                  std::size_t term_cap) {
  require_bandwidth(bandwidth);
  if (!(tail_tolerance > 0.0) || !(tail_tolerance <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "tail tolerance must lie in (0, 1]");
  }
  // The tail mass is about 2 Lambda / (pi^2 T); start there and adjust.
  const double target = tail_tolerance * bandwidth;
  double guess = 2.0 / (kPi * kPi * tail_tolerance);
  if (guess > static_cast<double>(term_cap) + 1.0) {
    throw Error(ErrorKind::kSizeLimit,
                "triangle truncation at tolerance " + std::to_string(tail_tolerance) +
                    " needs about " + std::to_string(guess) + " terms (cap " +
                    std::to_string(term_cap) + ")");
  }
  std::size_t terms = static_cast<std::size_t>(std::max(0.0, std::floor(guess) - 2.0));
  // The closed-form tail at zero terms is Lambda up to rounding.
  const double slack = target * (1.0 + 1e-12);
  while (terms > 0 && triangle_tail_mass(bandwidth, terms - 1) <= slack) --terms;
  while (triangle_tail_mass(bandwidth, terms) > slack) ++terms;
  if (terms > term_cap) {
    throw Error(ErrorKind::kSizeLimit, "triangle truncation exceeds the term cap");
  }
  ShiftRule rule;
  rule.symmetric = true;
  rule.source = RuleSource::kTriangleTruncated;
  rule.shifts.reserve(terms);
  rule.coefficients.reserve(terms);
  for (std::size_t t = 0; t < terms; ++t) {
    const TriangleTerm w = triangle_weight(static_cast<long>(t), bandwidth);
    rule.shifts.push_back(w.shift);
    rule.coefficients.push_back(t % 2 == 0 ? w.coefficient : -w.coefficient);
  }
  return rule;
}

double zigzag_density(double shift, double bandwidth) {
  require_bandwidth(bandwidth);
  const double x = bandwidth * shift;
  if (std::abs(x) < 1e-4) {
    return bandwidth / (2.0 * kPi) * (1.0 - x * x / 12.0);
  }
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (kPi * bandwidth * shift * shift);
}

double zigzag_cdf(double shift, double bandwidth) {
  require_bandwidth(bandwidth);
  const double x = bandwidth * shift;
  if (x == 0.0) return 0.5;
  double g_over_x;
  if (std::abs(x) < 1.0) {
    // g(x) = cos x - 1 + x Si(x) = sum_j (-1)^j x^2j [1/(2j)! - 1/((2j-1)(2j-1)!)]
    const double x2 = x * x;
    double fact_even = 2.0;  // (2j)!
    double fact_odd = 1.0;   // (2j-1)!
    double power = x;        // x^(2j-1)
    g_over_x = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double bracket = 1.0 / fact_even - 1.0 / ((2.0 * j - 1.0) * fact_odd);
      g_over_x += (j % 2 == 0 ? 1.0 : -1.0) * power * bracket;
      power *= x2;
      fact_odd = fact_even * (2.0 * j + 1.0);
      fact_even = fact_odd * (2.0 * j + 2.0);
    }
  } else {
    g_over_x = (std::cos(x) - 1.0) / x + sine_integral(x);
  }
  return 0.5 + g_over_x / kPi;
}

double zigzag_coefficient(double shift, double bandwidth) {
  return zigzag_density(shift, bandwidth) * 2.0 * bandwidth * std::sin(bandwidth * shift);
}

double zigzag_inverse_cdf(double u, double bandwidth) {
  require_bandwidth(bandwidth);
  const double half = kPi / bandwidth;
  return sample_inverse_cdf([bandwidth](double s) { return zigzag_cdf(s, bandwidth); }, u,
                            -half, half);
}

ShiftRule equispaced_rule(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "equispaced_rule: N must be >= 1");
  ShiftRule rule;
  rule.symmetric = true;
  rule.source = RuleSource::kEquispacedClosedForm;
  for (int t = 0; t < n; ++t) {
    const double s = kPi * (2.0 * t + 1.0) / (2.0 * n);
    const double h = std::sin(0.5 * s);
    // 1 - cos s = 2 sin^2(s/2)
    rule.shifts.push_back(s);
    rule.coefficients.push_back((t % 2 == 0 ? 1.0 : -1.0) / (4.0 * n * h * h));
  }
  return rule;
}

std::vector<double> equispaced_probabilities(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "equispaced_probabilities: N >= 1");
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const double h = std::sin(kPi * (2.0 * t + 1.0) / (4.0 * n));
    p[static_cast<std::size_t>(t)] = 1.0 / (2.0 * n * n * h * h);
  }
  return p;
}

double eta_coefficient(int t, int n) {
  if (n < 1 || t < 0 || t >= 2 * n) {
    throw Error(ErrorKind::kInvalidArgument, "eta_coefficient needs 0 <= t < 2N");
  }
  const double a = 2.0 * t + 1.0;
  const double b = 4.0 * n;
  constexpr int kTerms = 64;
  double direct = 0.0;
  for (int k = kTerms - 1; k >= 0; --k) {
    const double z = a + b * k;
    direct += 1.0 / (z * z);
  }
  // Euler-Maclaurin for sum_{k >= K} (a + b k)^-2.
  const double z = a + b * kTerms;
  const double tail = 1.0 / (b * z) + 0.5 / (z * z) + b / (6.0 * z * z * z) -
                      b * b * b / (30.0 * std::pow(z, 5));
  return 8.0 / (kPi * kPi) * (direct + tail);
}

double eta_trigamma(int t, int n) {
  if (n < 1 || t < 0 || t >= 2 * n) {
    throw Error(ErrorKind::kInvalidArgument, "eta_trigamma needs 0 <= t < 2N");
  }
  const double nn = static_cast<double>(n);
  return trigamma((2.0 * t + 1.0) / (4.0 * nn)) / (2.0 * kPi * kPi * nn * nn);
}

FrequencySet approx_bandwidth_frequencies(double bandwidth, int l) {
  require_bandwidth(bandwidth);
  if (l < 1) throw Error(ErrorKind::kInvalidArgument, "approx bandwidth grid needs L >= 1");
  std::vector<double> w;
  for (int k = -l; k <= l; ++k) w.push_back(bandwidth * k / l);
  return FrequencySet::from_values(w, 0.0);
}

LinearSystem approx_bandwidth_system(double bandwidth, int l, int p, double b) {
  if (l < 1 || p < l) {
    throw Error(ErrorKind::kInvalidArgument, "approx_bandwidth_system needs 1 <= L <= P");
  }
  const FrequencySet omega = approx_bandwidth_frequencies(bandwidth, l);
  return assemble(omega, positive_half(shift_grid(GridKind::kUniform, p, b)), true);
}

}  // namespace overshift
