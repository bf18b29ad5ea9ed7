#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "overshift/analytic.hpp"
#include "overshift/errors.hpp"
#include "overshift/l1opt.hpp"
#include "overshift/rng.hpp"
#include "overshift/special.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson rule with n (even) panels.
double Simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Composite 10-point Gauss-Legendre on m equal panels.
double Gauss(const std::function<double(double)>& f, double a, double b, int m) {
  static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                              0.8650633666889845, 0.9739065285171717};
  static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                              0.1494513491505806, 0.0666713443086881};
  const double h = (b - a) / m;
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (int i = 0; i < 5; ++i) {
      acc += w[i] * (f(mid - 0.5 * h * x[i]) + f(mid + 0.5 * h * x[i]));
    }
  }
  return acc * 0.5 * h;
}

TEST(Triangle, FirstTerm) {
  const TriangleTerm w = triangle_weight(0, 1.0);
  EXPECT_NEAR(w.shift, kPi / 2, 1e-15);
  EXPECT_NEAR(w.coefficient, 4.0 / (kPi * kPi), 1e-15);
  EXPECT_NEAR(w.coefficient, 0.405285, 1e-6);
  const TriangleTerm w3 = triangle_weight(3, 2.5);
  EXPECT_NEAR(w3.shift, kPi * 7 / 5.0, 1e-15);
  EXPECT_NEAR(w3.coefficient, 10.0 / (kPi * kPi * 49.0), 1e-15);
}

TEST(Triangle, MassSumsToBandwidth) {
  for (double lambda : {0.5, 1.0, 7.0}) {
    double partial = 0.0;
    double prev = 0.0;
    for (long t = 0; t < 20000; ++t) {
      partial += 2.0 * triangle_weight(t, lambda).coefficient;
      EXPECT_GT(partial, prev);
      prev = partial;
      if (t == 99 || t == 9999) {
        // Direct summation plus the trigamma tail gives Lambda.
        EXPECT_NEAR(partial + triangle_tail_mass(lambda, t + 1), lambda, 1e-12 * lambda);
        // Tail mass decays like 1/t.
        EXPECT_LT(triangle_tail_mass(lambda, t + 1) * (t + 1), lambda);
      }
    }
    EXPECT_LT(partial, lambda);
  }
}

TEST(Triangle, ProbabilityIsCoefficientOverBandwidth) {
  EXPECT_NEAR(triangle_probability(0), 8.0 / (kPi * kPi), 1e-15);
  EXPECT_NEAR(triangle_probability(0), 0.81057, 1e-5);
  for (long t = 0; t < 1000; t += 37) {
    const double lambda = 3.7;
    EXPECT_NEAR(2.0 * triangle_weight(t, lambda).coefficient / triangle_probability(t), lambda,
                1e-12);
  }
}

TEST(Triangle, ResponseIsTriangleWave) {
  const double lambda = 2.0;
  for (double w : {-2.0, -1.3, 0.0, 0.4, 2.0}) EXPECT_NEAR(triangle_response(w, lambda), w, 1e-12);
  EXPECT_NEAR(triangle_response(3.0, lambda), 1.0, 1e-12);
  EXPECT_NEAR(triangle_response(4.0, lambda), 0.0, 1e-12);
  EXPECT_NEAR(triangle_response(-5.0, lambda), 1.0, 1e-12);
}

TEST(TriangleTruncated, ToleranceOneIsEmpty) {
  const ShiftRule rule = triangle_truncated_rule(3.0, 1.0);
  EXPECT_EQ(rule.size(), 0u);
  EXPECT_EQ(rule.source, RuleSource::kTriangleTruncated);
}

TEST(TriangleTruncated, NormAndResidual) {
  for (int n : {1, 4, 10}) {
    for (double tol : {1e-2, 1e-4, 1e-5}) {
      const ShiftRule rule = triangle_truncated_rule(n, tol);
      EXPECT_LE(rule.l1_norm(), n);
      EXPECT_GE(rule.l1_norm(), n * (1.0 - tol) - 1e-12);
      EXPECT_LE(verify(rule, equispaced(n)), tol * n + 1e-12);
    }
  }
}

TEST(TriangleTruncated, DerivativeError) {
  Rng rng(3);
  const int n = 6;
  const double tol = 1e-6;
  const ShiftRule rule = triangle_truncated_rule(n, tol);
  const SpectralFunction f = random_spectral_function(equispaced(n), 12, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double theta = 2 * kPi * rng.uniform();
    EXPECT_LT(std::abs(apply_rule(rule, f, theta) - f.derivative(theta)),
              tol * n * f.abs_sum() + 1e-10);
  }
}

TEST(TriangleTruncated, TinyToleranceHitsTermCap) {
  // About 2e9 terms would be needed for a 1e-10 tail.
  try {
    triangle_truncated_rule(20.0, 1e-10);
    FAIL() << "expected size-limit";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSizeLimit);
  }
  EXPECT_THROW(triangle_truncated_rule(1.0, 0.0), Error);
}

TEST(Zigzag, DensityLimitAndCdfCenter) {
  for (double lambda : {0.5, 1.0, 4.0}) {
    EXPECT_NEAR(zigzag_density(0.0, lambda), lambda / (2 * kPi), 1e-15);
    EXPECT_NEAR(zigzag_density(1e-7, lambda), lambda / (2 * kPi), 1e-12);
    EXPECT_NEAR(zigzag_cdf(0.0, lambda), 0.5, 1e-15);
  }
}

TEST(Zigzag, DensityFormula) {
  const double lambda = 1.7;
  for (double s : {-3.0, -0.2, 0.05, 1.0, 9.0}) {
    const double expected =
        2 * std::pow(std::sin(s * lambda / 2), 2) / (kPi * lambda * s * s);
    EXPECT_NEAR(zigzag_density(s, lambda), expected, 1e-14);
  }
}

TEST(Zigzag, UnitMass) {
  const double lambda = 1.0;
  const double x = 3000.0;
  const double core = Simpson([&](double s) { return zigzag_density(s, lambda); }, -x, x, 600000);
  // Beyond |s| = X the density averages to 1/(pi Lambda s^2).
  const double tails = 2.0 / (kPi * lambda * x);
  EXPECT_NEAR(core + tails, 1.0, 1e-6);
}

TEST(Zigzag, CdfMatchesQuadrature) {
  for (double lambda : {0.8, 3.0}) {
    for (double s : {-4.0, -0.5, 0.3, 1.0, 2.5, 12.0}) {
      const double q =
          Gauss([&](double v) { return zigzag_density(v, lambda); }, 0.0, s, 400);
      EXPECT_NEAR(zigzag_cdf(s, lambda) - 0.5, q, 1e-10) << "s=" << s;
    }
  }
  double prev = 0.0;
  for (double s = -50.0; s <= 50.0; s += 0.37) {
    const double c = zigzag_cdf(s, 2.0);
    EXPECT_GE(c, prev - 1e-15);
    prev = c;
  }
  EXPECT_LT(zigzag_cdf(-1e6, 1.0), 1e-6);
  EXPECT_GT(zigzag_cdf(1e6, 1.0), 1 - 1e-6);
}

TEST(Zigzag, CoefficientRatio) {
  Rng rng(4);
  const double lambda = 2.3;
  for (int i = 0; i < 100; ++i) {
    const double s = 20.0 * rng.uniform() - 10.0;
    if (s == 0.0) continue;
    EXPECT_NEAR(zigzag_coefficient(s, lambda) / zigzag_density(s, lambda),
                2 * lambda * std::sin(s * lambda), 1e-12);
  }
}

TEST(Zigzag, NormBound) {
  const double lambda = 1.0;
  const double x = 3000.0;
  const double core =
      Simpson([&](double s) { return std::abs(zigzag_coefficient(s, lambda)); }, -x, x, 600000);
  // |c| <= 2 Lambda p, so the tails add at most 2 Lambda * 2/(pi Lambda X).
  EXPECT_LE(core, 2 * lambda + 1e-6);
  EXPECT_GT(core, 0.5 * lambda);
}

TEST(Zigzag, ExactForFrequenciesInBand) {
  const double lambda = 1.0;
  const double x = 4000.0;
  for (double w : {0.25, 0.5, 0.8}) {
    const double im = Simpson(
        [&](double s) { return zigzag_coefficient(s, lambda) * std::sin(w * s); }, -x, x, 800000);
    EXPECT_NEAR(im, w, 1e-4) << "w=" << w;
  }
}

TEST(Zigzag, InverseCdf) {
  EXPECT_NEAR(zigzag_inverse_cdf(0.5, 1.3), 0.0, 1e-9);
  for (double u : {1e-4, 0.01, 0.3, 0.77, 0.999}) {
    const double s = zigzag_inverse_cdf(u, 1.3);
    EXPECT_NEAR(zigzag_cdf(s, 1.3), u, 1e-10);
  }
}

TEST(SineIntegral, KnownValues) {
  EXPECT_EQ(sine_integral(0.0), 0.0);
  EXPECT_NEAR(sine_integral(1.0), 0.946083070367183, 1e-13);
  EXPECT_NEAR(sine_integral(kPi), 1.851937051982466, 1e-13);
  EXPECT_NEAR(sine_integral(10.0), 1.658347594218874, 1e-13);
  EXPECT_NEAR(sine_integral(1e3), kPi / 2, 1e-3);
  for (double x : {0.3, 4.0, 4.5, 77.0}) EXPECT_EQ(sine_integral(-x), -sine_integral(x));
}

TEST(SineIntegral, MatchesQuadrature) {
  auto sinc = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  for (int i = 1; i <= 20; ++i) {
    const double x = 0.37 * i * i;  // up to ~148
    const double q = Gauss(sinc, 0.0, x, 200 + 10 * i * i);
    EXPECT_NEAR(sine_integral(x), q, 1e-9) << "x=" << x;
  }
}

TEST(Trigamma, KnownValues) {
  EXPECT_NEAR(trigamma(1.0), kPi * kPi / 6, 1e-13);
  EXPECT_NEAR(trigamma(0.5), kPi * kPi / 2, 1e-13);
  EXPECT_NEAR(trigamma(0.25), kPi * kPi + 8 * 0.915965594177219015, 1e-12);
  for (double z : {0.1, 0.7, 3.3, 40.0}) {
    EXPECT_NEAR(trigamma(z), trigamma(z + 1) + 1 / (z * z), 1e-12 * trigamma(z));
  }
}

TEST(EquispacedRule, Examples) {
  const ShiftRule one = equispaced_rule(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.shifts[0], kPi / 2, 1e-15);
  EXPECT_NEAR(one.coefficients[0], 0.5, 1e-15);
  EXPECT_TRUE(one.symmetric);
  const ShiftRule two = equispaced_rule(2);
  EXPECT_NEAR(two.shifts[0], kPi / 4, 1e-15);
  EXPECT_NEAR(two.shifts[1], 3 * kPi / 4, 1e-15);
  EXPECT_NEAR(two.coefficients[0], 0.853553, 1e-6);
  EXPECT_NEAR(two.coefficients[1], -0.146447, 1e-6);
  EXPECT_EQ(two.source, RuleSource::kEquispacedClosedForm);
}

TEST(EquispacedRule, ExactWithNormN) {
  for (int n = 1; n <= 40; ++n) {
    const ShiftRule rule = equispaced_rule(n);
    EXPECT_LT(verify(rule, equispaced(n)), 1e-10) << "N=" << n;
    EXPECT_NEAR(rule.l1_norm(), n, 1e-12 * n) << "N=" << n;
    for (int t = 0; t < n; ++t) {
      const double theta = kPi * (2 * t + 1) / (2 * n);
      EXPECT_NEAR(rule.coefficients[t], (t % 2 ? -1.0 : 1.0) / (2 * n * (1 - std::cos(theta))),
                  1e-12);
    }
  }
}

TEST(EquispacedProbabilities, Normalized) {
  EXPECT_NEAR(equispaced_probabilities(1)[0], 1.0, 1e-15);
  const auto p2 = equispaced_probabilities(2);
  EXPECT_NEAR(p2[0], 0.853553, 1e-6);
  EXPECT_NEAR(p2[1], 0.146447, 1e-6);
  for (int n = 1; n <= 100; ++n) {
    double s = 0.0;
    for (double p : equispaced_probabilities(n)) s += p;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Eta, TrigammaAgreement) {
  for (int n = 1; n <= 50; n += 7) {
    for (int t = 0; t < 2 * n; ++t) {
      EXPECT_NEAR(eta_coefficient(t, n), eta_trigamma(t, n), 1e-10);
    }
  }
}

TEST(Eta, DirectSeriesOracle) {
  // Brute-force partial sum, smallest terms first, plus the integral tail.
  for (int n : {1, 3, 8}) {
    for (int t : {0, n, 2 * n - 1}) {
      double s = 0.0;
      const long k_max = 2000000;
      for (long k = k_max - 1; k >= 0; --k) {
        const double d = 2.0 * t + 4.0 * n * k + 1.0;
        s += 1.0 / (d * d);
      }
      s += 1.0 / (4.0 * n * (2.0 * t + 4.0 * n * k_max + 1.0));
      EXPECT_NEAR(eta_coefficient(t, n), 8.0 / (kPi * kPi) * s, 1e-12);
    }
  }
}

TEST(Eta, PairIdentity) {
  EXPECT_NEAR(0.5 * (eta_coefficient(0, 1) + eta_coefficient(1, 1)), 0.5, 1e-12);
  for (int n = 1; n <= 50; ++n) {
    double total = 0.0;
    for (int t = 0; t < 2 * n; ++t) total += eta_coefficient(t, n);
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (int t = 0; t < n; ++t) {
      const double lhs = 0.5 * n * (eta_coefficient(t, n) + eta_coefficient(2 * n - 1 - t, n));
      const double s = std::sin(kPi * (2 * t + 1) / (4.0 * n));
      EXPECT_NEAR(lhs, 1.0 / (4 * n * s * s), 1e-10);
    }
  }
}

TEST(ApproxBandwidth, Frequencies) {
  const FrequencySet one = approx_bandwidth_frequencies(2.5, 1);
  ASSERT_EQ(one.size(), 3u);
  EXPECT_EQ(one.frequencies()[0], -2.5);
  EXPECT_EQ(one.frequencies()[1], 0.0);
  EXPECT_EQ(one.frequencies()[2], 2.5);
  EXPECT_EQ(approx_bandwidth_frequencies(1.0, 7).size(), 15u);
}

TEST(ApproxBandwidth, ExactOnGridFrequencies) {
  const double lambda = 2.0;
  const int l = 8;
  const LinearSystem sys = approx_bandwidth_system(lambda, l, 3 * l, kPi);
  const ShiftRule rule = solve_l1(sys);
  const FrequencySet grid = approx_bandwidth_frequencies(lambda, l);
  EXPECT_LT(verify(rule, grid), 1e-8);
  const SpectralFunction f = random_spectral_function(grid, 4, 1.0);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const double theta = 10 * rng.uniform();
    EXPECT_NEAR(apply_rule(rule, f, theta), f.derivative(theta), 1e-8 * (1 + rule.l1_norm()));
  }
}

}  // namespace
}  // namespace overshift
