#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "overshift/linsys.hpp"
#include "overshift/specfun.hpp"
#include "overshift/spectrum.hpp"
#include "overshift/stochastic.hpp"

namespace overshift {

using Json = nlohmann::ordered_json;

Json to_json(const FrequencySet& omega);
FrequencySet frequency_set_from_json(const Json& j);

Json to_json(const SpectralFunction& f);
SpectralFunction spectral_function_from_json(const Json& j);

Json to_json(const ShiftRule& rule);
ShiftRule shift_rule_from_json(const Json& j);

Json to_json(const GradientEstimate& e);

Json read_json_file(const std::string& path);

inline constexpr int kCsvSchemaVersion = 1;

// CSV with a leading "# overshift-csv v<version> <experiment>" comment line
// followed by optional "# key=value" metadata lines and a header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& experiment,
            const std::vector<std::pair<std::string, std::string>>& metadata,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string format_double(double x);

}  // namespace overshift
