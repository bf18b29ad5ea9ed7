#include "overshift/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "overshift/errors.hpp"

namespace overshift {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNoSolution: return "no-solution";
    case ErrorKind::kIllConditioned: return "ill-conditioned";
    case ErrorKind::kInsufficientShots: return "insufficient-shots";
    case ErrorKind::kNumericFailure: return "numeric-failure";
    case ErrorKind::kBrokenInvariant: return "broken-invariant";
    case ErrorKind::kSizeLimit: return "size-limit";
    case ErrorKind::kTruncation: return "truncation";
    case ErrorKind::kDegenerateRule: return "degenerate-rule";
    case ErrorKind::kInvalidModel: return "invalid-model";
    case ErrorKind::kInvalidRule: return "invalid-rule";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNoSolution: return 2;
    case ErrorKind::kIllConditioned: return 3;
    case ErrorKind::kInsufficientShots: return 4;
    default: return 1;
  }
}

FrequencySet FrequencySet::from_values(const std::vector<double>& values,
                                       double dedup_tolerance) {
  if (!(dedup_tolerance >= 0.0) || !std::isfinite(dedup_tolerance)) {
    throw Error(ErrorKind::kInvalidArgument, "dedup tolerance must be finite and >= 0");
  }
  std::vector<double> mags;
  mags.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidArgument, "frequencies must be finite");
    }
    mags.push_back(std::abs(v));
  }
  std::sort(mags.begin(), mags.end());

  std::vector<double> reps;
  bool has_zero = false;
  std::size_t i = 0;
  while (i < mags.size()) {
    std::size_t j = i;
    while (j + 1 < mags.size() && mags[j + 1] - mags[j] <= dedup_tolerance) ++j;
    if (mags[i] <= dedup_tolerance) {
      has_zero = true;
    } else {
      reps.push_back(mags[j]);
    }
    i = j + 1;
  }

  FrequencySet out;
  out.tolerance_ = dedup_tolerance;
  out.frequencies_.reserve(2 * reps.size() + 1);
  for (auto it = reps.rbegin(); it != reps.rend(); ++it) out.frequencies_.push_back(-*it);
  if (has_zero) out.frequencies_.push_back(0.0);
  out.frequencies_.insert(out.frequencies_.end(), reps.begin(), reps.end());
  return out;
}

bool FrequencySet::contains_zero() const {
  return std::binary_search(frequencies_.begin(), frequencies_.end(), 0.0);
}

bool FrequencySet::contains(double omega) const {
  auto it = std::lower_bound(frequencies_.begin(), frequencies_.end(),
                             omega - tolerance_);
  return it != frequencies_.end() && std::abs(*it - omega) <= tolerance_;
}

std::vector<double> FrequencySet::positive_part() const {
  std::vector<double> out;
  for (double w : frequencies_) {
    if (w > 0.0) out.push_back(w);
  }
  return out;
}

double FrequencySet::bandwidth() const {
  if (frequencies_.empty()) return 0.0;
  return frequencies_.back();
}

FrequencySet from_eigenvalues(const std::vector<double>& energies,
                              double dedup_tolerance) {
  if (energies.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "from_eigenvalues: empty spectrum");
  }
  std::vector<double> diffs;
  diffs.reserve(energies.size() * energies.size());
  for (double ei : energies) {
    for (double ej : energies) diffs.push_back(ej - ei);
  }
  return FrequencySet::from_values(diffs, dedup_tolerance);
}

std::vector<double> positive_part(const FrequencySet& omega) {
  return omega.positive_part();
}

double bandwidth(const FrequencySet& omega) {
  if (omega.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "bandwidth of an empty set");
  }
  return omega.bandwidth();
}

FrequencySet shared_spectrum(const std::vector<FrequencySet>& layers,
                             std::size_t explosion_cap) {
  if (layers.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "shared_spectrum: no layers");
  }
  double candidates = 1.0;
  for (const auto& layer : layers) {
    if (layer.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "shared_spectrum: empty layer");
    }
    candidates *= static_cast<double>(layer.size());
  }
  if (candidates > static_cast<double>(explosion_cap)) {
    throw Error(ErrorKind::kSizeLimit,
                "shared_spectrum: " + std::to_string(candidates) +
                    " candidate sums exceed the cap; use shared_bandwidth");
  }
  double tol = 0.0;
  for (const auto& layer : layers) tol = std::max(tol, layer.tolerance());

  // Cluster maxima survive deduplication, so the largest sum is the layer
  // maxima added in order, which is exactly shared_bandwidth.
  std::vector<double> acc = layers.front().frequencies();
  for (std::size_t t = 1; t < layers.size(); ++t) {
    std::vector<double> next;
    next.reserve(acc.size() * layers[t].size());
    for (double a : acc) {
      for (double w : layers[t].frequencies()) next.push_back(a + w);
    }
    acc = FrequencySet::from_values(next, tol).frequencies();
  }
  return FrequencySet::from_values(acc, tol);
}

double shared_bandwidth(const std::vector<double>& layer_bandwidths) {
  double total = 0.0;
  for (double b : layer_bandwidths) {
    if (!(b >= 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "layer bandwidths must be >= 0");
    }
    total += b;
  }
  return total;
}

FrequencySet equispaced(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "equispaced: N must be >= 1");
  std::vector<double> v;
  for (int k = -n; k <= n; ++k) v.push_back(static_cast<double>(k));
  return FrequencySet::from_values(v, kDefaultDedupTolerance);
}

}  // namespace overshift
