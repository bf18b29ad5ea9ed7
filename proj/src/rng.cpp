#include "overshift/rng.hpp"

namespace overshift {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      key_(mix64(seed + kGolden) ^ mix64(~stream * 0xd1b54a32d192ed03ULL)) {}

Rng::result_type Rng::at(std::uint64_t counter) const {
  return mix64(mix64(key_ + (counter + 1) * kGolden) ^ key_);
}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(mix64(key_), index);
}

}  // namespace overshift
