#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "overshift/rng.hpp"
#include "overshift/specfun.hpp"
#include "overshift/spectrum.hpp"
#include "overshift/stochastic.hpp"

namespace overshift {

// XY chain: single-particle energies cos(pi k/(L+1)), k = 1..L.
FrequencySet xy_spectrum(int l);
// sum_{w > 0} cos(w theta) / w over the XY beat frequencies.
SpectralFunction xy_function(int l);

// Jaynes-Cummings: H = (delta/2) Z + (lambda/2)(a^dag s- + a s+), with
// Z|0> = |0>, Z|1> = -|1>, s+ = |0><1|, initial state |alpha> (x) |1>.
inline constexpr double kCoherentNormTolerance = 1e-8;

struct JCParams {
  double delta = 0.2;
  double lambda = 0.5;
  double alpha = 1.0;
  int cutoff = 10;
  // Largest coherent-state weight the truncation may drop. alpha = 1 at
  // cutoff 10 drops 1.005e-8.
  double norm_tolerance = kCoherentNormTolerance;
};

// sqrt(delta^2 + lambda^2 (n+1)): splitting of the block {|n,0>, |n+1,1>}.
double jc_eigenvalue(double delta, double lambda, int n);
// Eigenvalues of the Hamiltonian truncated at `cutoff` bosons.
std::vector<double> jc_energies(double delta, double lambda, int cutoff);
double jc_bandwidth(double delta, double lambda, int cutoff);
// Truncated coherent-state amplitudes, renormalized. Throws truncation when
// the retained weight is below 1 - tolerance.
std::vector<double> jc_coherent_amplitudes(double alpha, int cutoff,
                                           double tolerance = kCoherentNormTolerance);
// <Z>(theta) by propagating each 2x2 excitation block.
double jc_expectation(const JCParams& p, double theta);
// The same function as a spectral series over {0, +-E_n}.
SpectralFunction jc_function(const JCParams& p);

// F(phi) = sum_k M_k exp(2i sum_j k_j phi_j), k in {-1,0,1}^T, evaluated on
// phi = w theta.
class SharedZFunction {
 public:
  struct Term {
    std::vector<int> k;
    std::complex<double> coeff;
  };

  SharedZFunction(std::vector<double> weights, std::vector<Term> terms);

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Term>& terms() const { return terms_; }
  double eval(const std::vector<double>& phi) const;
  double abs_sum() const;
  // f(theta) = F(w theta) as a single-parameter spectral function.
  SpectralFunction reduce() const;

 private:
  std::vector<double> weights_;
  std::vector<Term> terms_;
};

struct SharedZModel {
  std::vector<double> weights;
  std::optional<SharedZFunction> multi;    // empty past the explosion cap
  std::optional<SpectralFunction> function;
  double bandwidth = 0.0;                  // 2 ||w||_1
};

SharedZModel shared_z_model(const std::vector<double>& weights, std::uint64_t seed,
                            std::size_t explosion_cap = kDefaultExplosionCap);

// sum_i w_i [F(phi + pi/4 e_i) - F(phi - pi/4 e_i)] at phi = w theta.
double chain_rule_baseline(const std::vector<double>& weights, const SharedZFunction& f,
                           double theta);
// Shot-based version with shots split over the 2T shifted circuits in
// proportion to |w_i|.
GradientEstimate chain_rule_estimate(const SharedZFunction& f, double theta, long shots,
                                     Rng& rng);

}  // namespace overshift
