#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "overshift/rng.hpp"
#include "overshift/spectrum.hpp"

namespace overshift {

struct SpectralTerm {
  double omega;
  std::complex<double> coeff;
};

// f(theta) = sum_w M_w exp(i w theta) with M_{-w} = conj(M_w).
class SpectralFunction {
 public:
  SpectralFunction() = default;

  // Merges terms whose frequencies agree within merge_tolerance and checks
  // conjugate symmetry to symmetry_tolerance (relative to max |M|).
  static SpectralFunction from_terms(const std::vector<SpectralTerm>& terms,
                                     double merge_tolerance = 1e-12,
                                     double symmetry_tolerance = 1e-12);
  // Builds the symmetric partner of every positive term; M_0 must be real.
  static SpectralFunction from_positive(double m0,
                                        const std::vector<SpectralTerm>& positive);

  const std::vector<SpectralTerm>& terms() const { return terms_; }
  double eval(double theta) const;
  double derivative(double theta) const;
  // Sum |M_w|, the default measurement amplitude.
  double abs_sum() const;
  // Sum |w M_w|, an upper bound on |f'|.
  double derivative_scale() const;
  double bandwidth() const;
  FrequencySet frequency_set(double tol = kDefaultDedupTolerance) const;

 private:
  std::vector<SpectralTerm> terms_;
};

SpectralFunction random_spectral_function(const FrequencySet& omega,
                                          std::uint64_t seed, double magnitude);
double eval(const SpectralFunction& f, double theta);
double exact_derivative(const SpectralFunction& f, double theta);

// Two-outcome shot model: +A with probability (1 + f/A)/2, otherwise -A.
class MeasurementModel {
 public:
  explicit MeasurementModel(SpectralFunction f);
  MeasurementModel(SpectralFunction f, double amplitude, bool noiseless = false);

  const SpectralFunction& function() const { return f_; }
  double amplitude() const { return amplitude_; }
  bool noiseless() const { return noiseless_; }
  double variance_bound() const { return amplitude_ * amplitude_; }

  double sample(double theta, Rng& rng) const;
  // Single outcome given the exact value and a uniform variate.
  double outcome(double value, double u) const;

 private:
  SpectralFunction f_;
  double amplitude_;
  bool noiseless_;
};

double sample_measurement(const MeasurementModel& m, double theta, Rng& rng);

}  // namespace overshift
