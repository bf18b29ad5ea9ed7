#include "overshift/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "overshift/errors.hpp"

namespace overshift {

SpectralFunction SpectralFunction::from_terms(const std::vector<SpectralTerm>& terms,
                                              double merge_tolerance,
                                              double symmetry_tolerance) {
  std::vector<SpectralTerm> sorted = terms;
  for (const auto& t : sorted) {
    if (!std::isfinite(t.omega) || !std::isfinite(t.coeff.real()) ||
        !std::isfinite(t.coeff.imag())) {
      throw Error(ErrorKind::kInvalidArgument, "spectral terms must be finite");
    }
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const SpectralTerm& a, const SpectralTerm& b) { return a.omega < b.omega; });
  SpectralFunction out;
  for (const auto& t : sorted) {
    if (!out.terms_.empty() && t.omega - out.terms_.back().omega <= merge_tolerance) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(t);
    }
  }
  double scale = 0.0;
  for (const auto& t : out.terms_) scale = std::max(scale, std::abs(t.coeff));
  const double tol = symmetry_tolerance * std::max(scale, 1.0);
  const std::size_t n = out.terms_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = out.terms_[i];
    const auto& b = out.terms_[n - 1 - i];
    if (std::abs(a.omega + b.omega) > merge_tolerance * std::max(1.0, std::abs(a.omega)) ||
        std::abs(a.coeff - std::conj(b.coeff)) > tol) {
      throw Error(ErrorKind::kBrokenInvariant,
                  "spectral function violates conjugate symmetry");
    }
  }
  return out;
}

SpectralFunction SpectralFunction::from_positive(double m0,
                                                 const std::vector<SpectralTerm>& positive) {
  std::vector<SpectralTerm> all;
  all.push_back({0.0, {m0, 0.0}});
  for (const auto& t : positive) {
    if (!(t.omega > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "from_positive: frequencies must be > 0");
    }
    all.push_back(t);
    all.push_back({-t.omega, std::conj(t.coeff)});
  }
  return from_terms(all);
}

double SpectralFunction::eval(double theta) const {
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::polar(1.0, t.omega * theta);
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, abs_sum())) {
    throw Error(ErrorKind::kBrokenInvariant, "eval: imaginary residue too large");
  }
  return acc.real();
}

double SpectralFunction::derivative(double theta) const {
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) {
    acc += t.coeff * std::complex<double>(0.0, t.omega) * std::polar(1.0, t.omega * theta);
  }
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, derivative_scale())) {
    throw Error(ErrorKind::kBrokenInvariant, "derivative: imaginary residue too large");
  }
  return acc.real();
}

double SpectralFunction::abs_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double SpectralFunction::derivative_scale() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.omega * t.coeff);
  return s;
}

double SpectralFunction::bandwidth() const {
  return terms_.empty() ? 0.0 : terms_.back().omega;
}

FrequencySet SpectralFunction::frequency_set(double tol) const {
  std::vector<double> w;
  for (const auto& t : terms_) w.push_back(t.omega);
  return FrequencySet::from_values(w, tol);
}

SpectralFunction random_spectral_function(const FrequencySet& omega,
                                          std::uint64_t seed, double magnitude) {
  Rng rng(seed, 0x5eedULL);
  double m0 = 0.0;
  std::vector<SpectralTerm> pos;
  if (omega.contains_zero()) m0 = magnitude * (2.0 * rng.uniform() - 1.0);
  for (double w : omega.positive_part()) {
    const double r = magnitude * rng.uniform();
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    pos.push_back({w, std::polar(r, phi)});
  }
  return SpectralFunction::from_positive(m0, pos);
}

double eval(const SpectralFunction& f, double theta) { return f.eval(theta); }

double exact_derivative(const SpectralFunction& f, double theta) {
  return f.derivative(theta);
}

MeasurementModel::MeasurementModel(SpectralFunction f)
    : MeasurementModel(f, f.abs_sum() > 0.0 ? f.abs_sum() : 1.0, false) {}

MeasurementModel::MeasurementModel(SpectralFunction f, double amplitude, bool noiseless)
    : f_(std::move(f)), amplitude_(amplitude), noiseless_(noiseless) {
  if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_)) {
    throw Error(ErrorKind::kInvalidModel, "measurement amplitude must be > 0");
  }
}

double MeasurementModel::outcome(double value, double u) const {
  if (noiseless_) return value;
  if (std::abs(value) > amplitude_ * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kInvalidModel, "|f(theta)| exceeds the outcome bound A");
  }
  const double p_plus = 0.5 * (1.0 + value / amplitude_);
  return u < p_plus ? amplitude_ : -amplitude_;
}

double MeasurementModel::sample(double theta, Rng& rng) const {
  return outcome(f_.eval(theta), rng.uniform());
}

double sample_measurement(const MeasurementModel& m, double theta, Rng& rng) {
  return m.sample(theta, rng);
}

}  // namespace overshift
