#include "overshift/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "overshift/errors.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

FrequencySet xy_spectrum(int l) {
  if (l < 2) throw Error(ErrorKind::kInvalidArgument, "xy chain needs L >= 2");
  std::vector<double> e;
  for (int k = 1; k <= l; ++k) e.push_back(std::cos(kPi * k / (l + 1.0)));
  return from_eigenvalues(e, 1e-9);
}

SpectralFunction xy_function(int l) {
  std::vector<SpectralTerm> pos;
  for (double w : xy_spectrum(l).positive_part()) pos.push_back({w, {0.5 / w, 0.0}});
  return SpectralFunction::from_positive(0.0, pos);
}

double jc_eigenvalue(double delta, double lambda, int n) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "jc_eigenvalue needs n >= 0");
  return std::sqrt(delta * delta + lambda * lambda * (n + 1.0));
}

std::vector<double> jc_energies(double delta, double lambda, int cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::kInvalidArgument, "JC cutoff must be >= 1");
  std::vector<double> e;
  e.push_back(-0.5 * delta);  // |0,1>
  e.push_back(0.5 * delta);   // |cutoff,0>, partner truncated away
  for (int k = 0; k < cutoff; ++k) {
    const double half = 0.5 * jc_eigenvalue(delta, lambda, k);
    e.push_back(-half);
    e.push_back(half);
  }
  return e;
}

double jc_bandwidth(double delta, double lambda, int cutoff) {
  const auto e = jc_energies(delta, lambda, cutoff);
  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  return *hi - *lo;
}

std::vector<double> jc_coherent_amplitudes(double alpha, int cutoff, double tolerance) {
  if (cutoff < 1) throw Error(ErrorKind::kInvalidArgument, "JC cutoff must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(cutoff) + 1);
  double amp = std::exp(-0.5 * alpha * alpha);
  double norm2 = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) amp *= alpha / std::sqrt(static_cast<double>(n));
    c[static_cast<std::size_t>(n)] = amp;
    norm2 += amp * amp;
  }
  if (norm2 < 1.0 - tolerance) {
    throw Error(ErrorKind::kTruncation,
                "coherent state drops weight " + std::to_string(1.0 - norm2) + " at cutoff " +
                    std::to_string(cutoff) + "; raise the cutoff");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& x : c) x *= scale;
  return c;
}

double jc_expectation(const JCParams& p, double theta) {
  const auto c = jc_coherent_amplitudes(p.alpha, p.cutoff, p.norm_tolerance);
  double z = -c[0] * c[0];
  for (int k = 0; k < p.cutoff; ++k) {
    const double amp = c[static_cast<std::size_t>(k) + 1];
    const double g = 0.5 * p.lambda * std::sqrt(k + 1.0);
    const double e = jc_eigenvalue(p.delta, p.lambda, k);
    std::complex<double> up = 0.0;  // |k,0>
    std::complex<double> down = amp;  // |k+1,1>
    if (e > 0.0) {
      // exp(-i H theta) = cos(e theta/2) - i sin(e theta/2) H / (e/2)
      const double cs = std::cos(0.5 * e * theta);
      const double sn = std::sin(0.5 * e * theta);
      const std::complex<double> i(0.0, 1.0);
      up = -i * sn * (g / (0.5 * e)) * amp;
      down = (cs - i * sn * (-0.5 * p.delta) / (0.5 * e)) * amp;
    }
    z += std::norm(up) - std::norm(down);
  }
  return z;
}

SpectralFunction jc_function(const JCParams& p) {
  const auto c = jc_coherent_amplitudes(p.alpha, p.cutoff, p.norm_tolerance);
  double m0 = -c[0] * c[0];
  std::vector<SpectralTerm> pos;
  for (int k = 0; k < p.cutoff; ++k) {
    const double w = c[static_cast<std::size_t>(k) + 1];
    const double g = 0.5 * p.lambda * std::sqrt(k + 1.0);
    const double e = jc_eigenvalue(p.delta, p.lambda, k);
    const double mix = e > 0.0 ? 4.0 * g * g / (e * e) : 0.0;
    m0 += w * w * (mix - 1.0);
    if (e > 0.0 && mix > 0.0) pos.push_back({e, {-0.5 * w * w * mix, 0.0}});
  }
  return SpectralFunction::from_positive(m0, pos);
}

SharedZFunction::SharedZFunction(std::vector<double> weights, std::vector<Term> terms)
    : weights_(std::move(weights)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.k.size() != weights_.size()) {
      throw Error(ErrorKind::kInvalidArgument, "shared-Z term has the wrong arity");
    }
  }
}

double SharedZFunction::eval(const std::vector<double>& phi) const {
  if (phi.size() != weights_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "shared-Z evaluation needs one angle per gate");
  }
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) {
    double arg = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) arg += 2.0 * t.k[j] * phi[j];
    acc += t.coeff * std::polar(1.0, arg);
  }
  return acc.real();
}

double SharedZFunction::abs_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

SpectralFunction SharedZFunction::reduce() const {
  std::vector<SpectralTerm> terms;
  for (const auto& t : terms_) {
    double w = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) w += 2.0 * t.k[j] * weights_[j];
    terms.push_back({w, t.coeff});
  }
  return SpectralFunction::from_terms(terms);
}

SharedZModel shared_z_model(const std::vector<double>& weights, std::uint64_t seed,
                            std::size_t explosion_cap) {
  for (double w : weights) {
    if (!std::isfinite(w)) throw Error(ErrorKind::kInvalidArgument, "weights must be finite");
  }
  SharedZModel model;
  model.weights = weights;
  std::vector<double> layer_bw;
  for (double w : weights) layer_bw.push_back(2.0 * std::abs(w));
  model.bandwidth = shared_bandwidth(layer_bw);
  const std::size_t t_count = weights.size();
  const double count = std::pow(3.0, static_cast<double>(t_count));
  if (count > static_cast<double>(explosion_cap)) return model;

  // Enumerate k in {-1,0,1}^T; k and -k share a conjugate coefficient.
  const std::size_t total = static_cast<std::size_t>(count);
  const double magnitude = 1.0 / static_cast<double>(total);
  Rng rng(seed, 0x5a5aULL);
  std::vector<SharedZFunction::Term> terms(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    terms[idx].k.resize(t_count);
    for (std::size_t j = 0; j < t_count; ++j) {
      terms[idx].k[j] = static_cast<int>(r % 3) - 1;
      r /= 3;
    }
  }
  // Index of -k is total - 1 - idx under the balanced-ternary encoding.
  for (std::size_t idx = 0; idx < total; ++idx) {
    const std::size_t mirror = total - 1 - idx;
    if (idx < mirror) {
      const double r = magnitude * rng.uniform();
      const double phi = 2.0 * kPi * rng.uniform();
      terms[idx].coeff = std::polar(r, phi);
      terms[mirror].coeff = std::conj(terms[idx].coeff);
    } else if (idx == mirror) {
      terms[idx].coeff = magnitude * (2.0 * rng.uniform() - 1.0);
    }
  }
  model.multi.emplace(weights, std::move(terms));
  model.function = model.multi->reduce();
  return model;
}

double chain_rule_baseline(const std::vector<double>& weights, const SharedZFunction& f,
                           double theta) {
  if (weights.size() != f.weights().size()) {
    throw Error(ErrorKind::kInvalidArgument, "chain rule: weight count mismatch");
  }
  std::vector<double> phi(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) phi[j] = f.weights()[j] * theta;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    auto plus = phi;
    auto minus = phi;
    plus[i] += kPi / 4;
    minus[i] -= kPi / 4;
    acc += weights[i] * (f.eval(plus) - f.eval(minus));
  }
  return acc;
}

GradientEstimate chain_rule_estimate(const SharedZFunction& f, double theta, long shots,
                                     Rng& rng) {
  const auto& w = f.weights();
  const std::size_t t_count = w.size();
  // Shifted circuits are labelled 0..2T-1 so the allocator can be reused.
  ShiftRule labels;
  for (std::size_t i = 0; i < t_count; ++i) {
    labels.shifts.push_back(2.0 * i);
    labels.coefficients.push_back(w[i]);
    labels.shifts.push_back(2.0 * i + 1.0);
    labels.coefficients.push_back(-w[i]);
  }
  const ShotPlan plan = allocate_shots(labels, shots);
  const double amplitude = f.abs_sum() > 0.0 ? f.abs_sum() : 1.0;
  const std::uint64_t seed = rng.seed();
  const std::uint64_t base = rng();
  Rng meas(base, 1);
  std::vector<double> phi(t_count);
  for (std::size_t j = 0; j < t_count; ++j) phi[j] = w[j] * theta;
  GradientEstimate e;
  e.method = "chain-rule";
  e.seed = seed;
  double var = 0.0;
  long counter = 0;
  for (std::size_t p = 0; p < plan.shifts.size(); ++p) {
    const double c = plan.coefficients[p];
    const long sp = plan.shots[p];
    if (c == 0.0) continue;
    const std::size_t gate = static_cast<std::size_t>(plan.shifts[p]) / 2;
    const bool plus = static_cast<long>(plan.shifts[p]) % 2 == 0;
    auto shifted = phi;
    shifted[gate] += plus ? kPi / 4 : -kPi / 4;
    const double value = f.eval(shifted);
    const double p_plus = 0.5 * (1.0 + value / amplitude);
    double sum = 0.0;
    double sum2 = 0.0;
    for (long k = 0; k < sp; ++k) {
      const double g = meas.uniform_at(static_cast<std::uint64_t>(counter++)) < p_plus
                           ? amplitude
                           : -amplitude;
      sum += g;
      sum2 += g * g;
    }
    const double mean = sum / static_cast<double>(sp);
    const double vp = sp >= 2 ? (sum2 - sp * mean * mean) / (sp - 1.0) : amplitude * amplitude;
    e.mean += c * mean;
    var += c * c * vp / static_cast<double>(sp);
    e.max_abs_weight = std::max(e.max_abs_weight, std::abs(c));
  }
  e.shots = plan.total();
  e.std_error = std::sqrt(var);
  e.plan = plan;
  return e;
}

}  // namespace overshift
