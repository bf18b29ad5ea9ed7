#pragma once

#include <string>
#include <vector>

#include "overshift/rng.hpp"
#include "overshift/spectrum.hpp"

namespace overshift {

enum class KernelFamily { kNormal, kUniform, kCauchy, kCosine, kWigner };

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Shift density p and its characteristic function k (Bochner pair):
//   normal   p = N(0, B^2)                       k = exp(-B^2 w^2 / 2)
//   uniform  p = 1/(2B) on [-B, B]               k = sin(Bw)/(Bw)
//   cauchy   p = (B/pi) / (1 + (B s)^2)          k = exp(-|w|/B)
//   cosine   p = (1 + cos(pi s/B)) / (2B), |s|<=B
//   wigner   p = 2 sqrt(B^2 - s^2) / (pi B^2)    k = 2 J1(Bw)/(Bw)
struct KernelSpec {
  KernelFamily family = KernelFamily::kNormal;
  double width = 1.0;
};

void validate(const KernelSpec& spec);
double kernel_value(const KernelSpec& spec, double omega);
double kernel_density(const KernelSpec& spec, double shift);
double kernel_cdf(const KernelSpec& spec, double shift);
double kernel_sample(const KernelSpec& spec, Rng& rng);

inline constexpr double kMaxKernelCondition = 1e12;

struct KernelWeights {
  FrequencySet omega;
  KernelSpec spec;
  std::vector<double> y;            // indexed like omega.frequencies()
  std::vector<double> gershgorin;   // R_i = sum_{j != i} |k(w_i - w_j)|
  double condition = 1.0;
};

// Solves K y = w with K_ij = k(w_i - w_j) + jitter * delta_ij.
KernelWeights kernel_weights(const FrequencySet& omega, const KernelSpec& spec,
                             double jitter = 0.0);

// lambda(s) = sum_{w > 0} 2 y_w sin(w s).
double kernel_lambda(const KernelWeights& weights, double shift);

// Interpolant sum_i y_i k(w - w_i); equals w on omega.
double kernel_interpolant(const KernelWeights& weights, double omega);

}  // namespace overshift
