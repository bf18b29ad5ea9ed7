#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "overshift/errors.hpp"
#include "overshift/rng.hpp"
#include "overshift/specfun.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;

SpectralFunction HalfCosine() {
  // 0.5 + 0.5 cos(theta)
  return SpectralFunction::from_positive(0.5, {{1.0, {0.25, 0.0}}});
}

TEST(RandomSpectralFunction, Deterministic) {
  const FrequencySet omega = from_eigenvalues({0.0, 0.4, 1.3, 2.0});
  const SpectralFunction a = random_spectral_function(omega, 17, 1.0);
  const SpectralFunction b = random_spectral_function(omega, 17, 1.0);
  ASSERT_EQ(a.terms().size(), b.terms().size());
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    EXPECT_EQ(a.terms()[i].omega, b.terms()[i].omega);
    EXPECT_EQ(a.terms()[i].coeff, b.terms()[i].coeff);
  }
  const SpectralFunction c = random_spectral_function(omega, 18, 1.0);
  EXPECT_NE(a.eval(0.3), c.eval(0.3));
}

TEST(RandomSpectralFunction, ZeroOnlyIsConstant) {
  const SpectralFunction f = random_spectral_function(FrequencySet::from_values({0.0}), 3, 1.0);
  for (double theta : {-2.0, 0.0, 0.7, 5.0}) {
    EXPECT_EQ(exact_derivative(f, theta), 0.0);
    EXPECT_NEAR(f.eval(theta), f.eval(0.0), 1e-15);
  }
}

TEST(RandomSpectralFunction, MagnitudeAndSymmetry) {
  const FrequencySet omega = equispaced(6);
  const SpectralFunction f = random_spectral_function(omega, 5, 0.3);
  for (const auto& t : f.terms()) {
    EXPECT_LE(std::abs(t.coeff), 0.3 + 1e-15);
    bool found = false;
    for (const auto& u : f.terms()) {
      if (u.omega == -t.omega) {
        found = true;
        EXPECT_NEAR(std::abs(u.coeff - std::conj(t.coeff)), 0.0, 1e-15);
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(RandomSpectralFunction, RealValued) {
  const FrequencySet omega = from_eigenvalues({0.0, 0.31, 1.2, 2.9, 3.3});
  const SpectralFunction f = random_spectral_function(omega, 99, 1.0);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double theta = 20.0 * (rng.uniform() - 0.5);
    std::complex<double> acc = 0.0;
    for (const auto& t : f.terms()) acc += t.coeff * std::exp(std::complex<double>(0, t.omega * theta));
    EXPECT_LT(std::abs(acc.imag()), 1e-12);
    EXPECT_NEAR(f.eval(theta), acc.real(), 1e-12);
  }
}

TEST(Eval, Examples) {
  const SpectralFunction f = HalfCosine();
  EXPECT_NEAR(eval(f, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(eval(f, kPi), 0.0, 1e-15);
}

TEST(ExactDerivative, Examples) {
  const SpectralFunction f = HalfCosine();
  EXPECT_NEAR(exact_derivative(f, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(exact_derivative(f, kPi / 2), -0.5, 1e-15);
}

TEST(ExactDerivative, MatchesFiniteDifferences) {
  Rng rng(11);
  for (int inst = 0; inst < 50; ++inst) {
    std::vector<double> energies;
    const int levels = 2 + inst % 5;
    for (int k = 0; k < levels; ++k) energies.push_back(4.0 * rng.uniform() - 2.0);
    const FrequencySet omega = from_eigenvalues(energies);
    const SpectralFunction f = random_spectral_function(omega, 1000 + inst, 1.0);
    const double theta = 6.0 * rng.uniform() - 3.0;
    const double h = 1e-6;
    const double fd = (f.eval(theta + h) - f.eval(theta - h)) / (2 * h);
    const double exact = f.derivative(theta);
    EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, f.derivative_scale())) << "instance " << inst;
  }
}

TEST(SpectralFunction, RejectsAsymmetricTerms) {
  EXPECT_THROW(SpectralFunction::from_terms({{1.0, {0.5, 0.0}}, {-1.0, {0.2, 0.0}}}), Error);
  EXPECT_THROW(SpectralFunction::from_terms({{1.0, {0.5, 0.0}}}), Error);
}

TEST(SpectralFunction, FromTermsMergesDuplicates) {
  const SpectralFunction f = SpectralFunction::from_terms(
      {{1.0, {0.25, 0.0}}, {-1.0, {0.25, 0.0}}, {1.0, {0.25, 0.0}}, {-1.0, {0.25, 0.0}}});
  EXPECT_NEAR(f.eval(0.0), 1.0, 1e-15);
  EXPECT_EQ(f.terms().size(), 2u);
}

TEST(MeasurementModel, SaturatedIsDeterministic) {
  const SpectralFunction f = HalfCosine();
  const MeasurementModel m(f, 1.0);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(m.sample(0.0, rng), 1.0);
}

TEST(MeasurementModel, ZeroMeanUnbiased) {
  const SpectralFunction f = HalfCosine();
  const MeasurementModel m(f, 1.0);
  Rng rng(7);
  const int n = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = m.sample(kPi, rng);
    EXPECT_EQ(std::abs(y), 1.0);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / n;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n));
  EXPECT_LE(sum2 / n - mean * mean, 1.0 + 1e-12);
}

TEST(MeasurementModel, UnbiasedAtGenericValue) {
  const SpectralFunction f = HalfCosine();
  const MeasurementModel m(f);
  Rng rng(8);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += m.sample(1.0, rng);
  EXPECT_LT(std::abs(sum / n - f.eval(1.0)), 4.0 * m.amplitude() / std::sqrt(n));
}

TEST(MeasurementModel, DefaultAmplitudeIsAbsSum) {
  const SpectralFunction f = HalfCosine();
  EXPECT_DOUBLE_EQ(MeasurementModel(f).amplitude(), 1.0);
  EXPECT_DOUBLE_EQ(MeasurementModel(f).variance_bound(), 1.0);
}

TEST(MeasurementModel, AmplitudeTooSmall) {
  const MeasurementModel m(HalfCosine(), 0.5);
  Rng rng(1);
  try {
    m.sample(0.0, rng);
    FAIL() << "expected invalid-model";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidModel);
  }
}

TEST(MeasurementModel, Noiseless) {
  const SpectralFunction f = HalfCosine();
  const MeasurementModel m(f, 1.0, true);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(m.sample(0.4, rng), f.eval(0.4));
}

TEST(Rng, ReplayAndStreams) {
  Rng a(5, 0);
  Rng b(5, 0);
  Rng c(5, 1);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_EQ(x, Rng(5, 0).at(i));
    EXPECT_NE(x, c());
  }
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

}  // namespace
}  // namespace overshift
