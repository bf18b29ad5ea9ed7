#pragma once

#include <cstdint>
#include <limits>

namespace overshift {

// Counter-based generator: the i-th output is a pure function of
// (seed, stream, i), so any draw can be replayed without the ones before it.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return at(counter_++); }
  result_type at(std::uint64_t counter) const;

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return to_unit(operator()()); }
  double uniform_at(std::uint64_t counter) const { return to_unit(at(counter)); }

  Rng substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace overshift
