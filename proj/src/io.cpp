#include "overshift/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "overshift/errors.hpp"

namespace overshift {
namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

}  // namespace

std::string format_double(double x) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << x;
  return s.str();
}

Json to_json(const FrequencySet& omega) {
  return Json{{"frequencies", omega.frequencies()}, {"tolerance", omega.tolerance()}};
}

FrequencySet frequency_set_from_json(const Json& j) {
  try {
    const double tol = j.value("tolerance", kDefaultDedupTolerance);
    return FrequencySet::from_values(j.at("frequencies").get<std::vector<double>>(), tol);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("frequency set JSON: ") + e.what());
  }
}

Json to_json(const SpectralFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    terms.push_back({{"omega", t.omega}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
  }
  return Json{{"terms", terms}};
}

SpectralFunction spectral_function_from_json(const Json& j) {
  try {
    std::vector<SpectralTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("omega").get<double>(),
                       {t.value("re", 0.0), t.value("im", 0.0)}});
    }
    return SpectralFunction::from_terms(terms);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("spectral function JSON: ") + e.what());
  }
}

Json to_json(const ShiftRule& rule) {
  return Json{{"shifts", rule.shifts},
              {"coefficients", rule.coefficients},
              {"symmetric", rule.symmetric},
              {"source", to_string(rule.source)},
              {"l1_norm", rule.l1_norm()}};
}

ShiftRule shift_rule_from_json(const Json& j) {
  try {
    ShiftRule rule;
    rule.shifts = j.at("shifts").get<std::vector<double>>();
    rule.coefficients = j.at("coefficients").get<std::vector<double>>();
    rule.symmetric = j.value("symmetric", false);
    rule.source = rule_source_from_string(j.value("source", std::string("manual")));
    validate(rule);
    return rule;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("shift rule JSON: ") + e.what());
  }
}

Json to_json(const GradientEstimate& e) {
  return Json{{"mean", number(e.mean)},
              {"stderr", number(e.std_error)},
              {"shots", e.shots},
              {"method", e.method},
              {"seed", e.seed}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "'" + path + "': " + e.what());
  }
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& experiment,
                     const std::vector<std::pair<std::string, std::string>>& metadata,
                     const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# overshift-csv v" << kCsvSchemaVersion << " " << experiment << "\n";
  for (const auto& [k, v] : metadata) out_ << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> s;
  for (double v : values) s.push_back(format_double(v));
  row(s);
}

void CsvWriter::row(const std::vector<std::string>& values) {
  if (values.size() != columns_) {
    throw Error(ErrorKind::kInvalidArgument, "CSV row width does not match the header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
  out_ << "\n";
}

}  // namespace overshift
