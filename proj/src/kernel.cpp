#include "overshift/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "overshift/errors.hpp"
#include "overshift/stochastic.hpp"

namespace overshift {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kNormal: return "normal";
    case KernelFamily::kUniform: return "uniform";
    case KernelFamily::kCauchy: return "cauchy";
    case KernelFamily::kCosine: return "cosine";
    case KernelFamily::kWigner: return "wigner";
  }
  return "normal";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  for (KernelFamily f : {KernelFamily::kNormal, KernelFamily::kUniform, KernelFamily::kCauchy,
                         KernelFamily::kCosine, KernelFamily::kWigner}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown kernel family '" + name + "'");
}

void validate(const KernelSpec& spec) {
  if (!(spec.width > 0.0) || !std::isfinite(spec.width)) {
    throw Error(ErrorKind::kInvalidArgument, "kernel width B must be finite and > 0");
  }
}

double kernel_value(const KernelSpec& spec, double omega) {
  validate(spec);
  const double b = spec.width;
  const double x = b * omega;
  switch (spec.family) {
    case KernelFamily::kNormal:
      return std::exp(-0.5 * x * x);
    case KernelFamily::kUniform:
      return sinc(x);
    case KernelFamily::kCauchy:
      return std::exp(-std::abs(omega) / b);
    case KernelFamily::kCosine: {
      const double ax = std::abs(x);
      if (std::abs(ax - kPi) < 1e-5) {
        // Removable singularity at |Bw| = pi; expand sin(x)/(pi - x).
        const double e = kPi - ax;
        return kPi * kPi / (ax * (kPi + ax)) * (1.0 - e * e / 6.0);
      }
      return sinc(ax) * kPi * kPi / (kPi * kPi - ax * ax);
    }
    case KernelFamily::kWigner: {
      const double ax = std::abs(x);
      if (ax < 1e-4) return 1.0 - ax * ax / 8.0;
      return 2.0 * std::cyl_bessel_j(1.0, ax) / ax;
    }
  }
  return 0.0;
}

double kernel_density(const KernelSpec& spec, double shift) {
  validate(spec);
  const double b = spec.width;
  switch (spec.family) {
    case KernelFamily::kNormal:
      return std::exp(-0.5 * shift * shift / (b * b)) / (b * std::sqrt(2.0 * kPi));
    case KernelFamily::kUniform:
      return std::abs(shift) <= b ? 0.5 / b : 0.0;
    case KernelFamily::kCauchy:
      return (b / kPi) / (1.0 + (b * shift) * (b * shift));
    case KernelFamily::kCosine:
      return std::abs(shift) <= b ? (1.0 + std::cos(kPi * shift / b)) / (2.0 * b) : 0.0;
    case KernelFamily::kWigner:
      return std::abs(shift) <= b ? 2.0 * std::sqrt(b * b - shift * shift) / (kPi * b * b)
                                  : 0.0;
  }
  return 0.0;
}

double kernel_cdf(const KernelSpec& spec, double shift) {
  validate(spec);
  const double b = spec.width;
  switch (spec.family) {
    case KernelFamily::kNormal:
      return 0.5 * std::erfc(-shift / (b * std::sqrt(2.0)));
    case KernelFamily::kUniform:
      return std::clamp((shift + b) / (2.0 * b), 0.0, 1.0);
    case KernelFamily::kCauchy:
      return 0.5 + std::atan(b * shift) / kPi;
    case KernelFamily::kCosine:
      if (shift <= -b) return 0.0;
      if (shift >= b) return 1.0;
      return 0.5 + shift / (2.0 * b) + std::sin(kPi * shift / b) / (2.0 * kPi);
    case KernelFamily::kWigner:
      if (shift <= -b) return 0.0;
      if (shift >= b) return 1.0;
      return 0.5 + shift * std::sqrt(b * b - shift * shift) / (kPi * b * b) +
             std::asin(shift / b) / kPi;
  }
  return 0.0;
}

double kernel_sample(const KernelSpec& spec, Rng& rng) {
  validate(spec);
  const double b = spec.width;
  switch (spec.family) {
    case KernelFamily::kNormal: {
      // Box-Muller; 1 - u keeps the logarithm finite.
      const double u1 = 1.0 - rng.uniform();
      const double u2 = rng.uniform();
      return b * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
    case KernelFamily::kUniform:
      return b * (2.0 * rng.uniform() - 1.0);
    case KernelFamily::kCauchy:
      return std::tan(kPi * (rng.uniform() - 0.5)) / b;
    case KernelFamily::kCosine: {
      const double u = rng.uniform();
      return sample_inverse_cdf([&spec](double s) { return kernel_cdf(spec, s); }, u, -b, b);
    }
    case KernelFamily::kWigner: {
      // x-coordinate of a uniform point in the disk of radius B.
      const double r = b * std::sqrt(rng.uniform());
      return r * std::cos(2.0 * kPi * rng.uniform());
    }
  }
  return 0.0;
}

KernelWeights kernel_weights(const FrequencySet& omega, const KernelSpec& spec,
                             double jitter) {
  validate(spec);
  if (!(jitter >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "jitter must be >= 0");
  const auto& w = omega.frequencies();
  const Eigen::Index n = static_cast<Eigen::Index>(w.size());
  KernelWeights out;
  out.omega = omega;
  out.spec = spec;
  out.y.assign(w.size(), 0.0);
  out.gershgorin.assign(w.size(), 0.0);
  if (n == 0) return out;
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = w[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = kernel_value(spec, w[i] - w[j]);
      if (i != j) out.gershgorin[i] += std::abs(k(i, j));
    }
    k(i, i) += jitter;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kMaxKernelCondition)) {
    double rmax = 0.0;
    for (double r : out.gershgorin) rmax = std::max(rmax, r);
    std::ostringstream msg;
    msg << "kernel matrix condition estimate " << out.condition
        << " exceeds 1e12; largest Gershgorin radius " << rmax
        << " (radii well below 1 guarantee a solvable system; change the width B)";
    throw Error(ErrorKind::kIllConditioned, msg.str());
  }
  const Eigen::VectorXd y = k.ldlt().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) out.y[i] = y(i);
  return out;
}

double kernel_lambda(const KernelWeights& weights, double shift) {
  const auto& w = weights.omega.frequencies();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) acc += 2.0 * weights.y[i] * std::sin(w[i] * shift);
  }
  return acc;
}

double kernel_interpolant(const KernelWeights& weights, double omega) {
  const auto& w = weights.omega.frequencies();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += weights.y[i] * kernel_value(weights.spec, omega - w[i]);
  }
  return acc;
}

}  // namespace overshift
