#pragma once

#include <cstddef>
#include <vector>

namespace overshift {

inline constexpr double kDefaultDedupTolerance = 1e-9;
inline constexpr std::size_t kDefaultExplosionCap = 1000000;

// Sorted, deduplicated, negation-closed set of beat frequencies.
class FrequencySet {
 public:
  FrequencySet() = default;

  // Symmetrizes and deduplicates arbitrary input. Values within the
  // tolerance of zero collapse onto zero; the largest member of every
  // cluster is kept, so the bandwidth survives deduplication exactly.
  static FrequencySet from_values(const std::vector<double>& values,
                                  double dedup_tolerance = kDefaultDedupTolerance);

  const std::vector<double>& frequencies() const { return frequencies_; }
  double tolerance() const { return tolerance_; }
  std::size_t size() const { return frequencies_.size(); }
  bool empty() const { return frequencies_.empty(); }
  bool contains_zero() const;
  bool contains(double omega) const;

  std::vector<double> positive_part() const;
  double bandwidth() const;

 private:
  std::vector<double> frequencies_;
  double tolerance_ = kDefaultDedupTolerance;
};

FrequencySet from_eigenvalues(const std::vector<double>& energies,
                              double dedup_tolerance = kDefaultDedupTolerance);

std::vector<double> positive_part(const FrequencySet& omega);
double bandwidth(const FrequencySet& omega);

FrequencySet shared_spectrum(const std::vector<FrequencySet>& layers,
                             std::size_t explosion_cap = kDefaultExplosionCap);
double shared_bandwidth(const std::vector<double>& layer_bandwidths);

FrequencySet equispaced(int n);

}  // namespace overshift
