#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "overshift/applications.hpp"
#include "overshift/specfun.hpp"
#include "overshift/spectrum.hpp"

namespace overshift {

// Named models: "equispaced:N", "xy:L", "jc:delta,lambda,alpha,cutoff[,norm_tolerance]",
// "shared-z:w1,w2,...".
struct Model {
  std::string name;
  std::string kind;
  FrequencySet omega;
  std::optional<SpectralFunction> function;  // empty for bandwidth-only models
  double bandwidth = 0.0;
  int equispaced_n = 0;
  std::optional<JCParams> jc;
  std::optional<SharedZFunction> shared;
};

Model parse_model(const std::string& spec, std::uint64_t seed = 0);

// A model name, a JSON file with {"frequencies": [...]}, or a bare list
// "w1,w2,..." of frequencies.
FrequencySet parse_omega(const std::string& spec, std::uint64_t seed = 0);

}  // namespace overshift
