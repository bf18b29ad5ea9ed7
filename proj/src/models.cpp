#include "overshift/models.hpp"

#include <sstream>
#include <vector>

#include "overshift/errors.hpp"
#include "overshift/io.hpp"

namespace overshift {
namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "bad number '" + item + "' in " + what);
    }
  }
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 1 || v[0] != static_cast<int>(v[0])) {
    throw Error(ErrorKind::kInvalidArgument, what + " needs one integer");
  }
  return static_cast<int>(v[0]);
}

}  // namespace

Model parse_model(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "model '" + spec + "' lacks a ':' argument");
  }
  Model m;
  m.name = spec;
  m.kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (m.kind == "equispaced") {
    m.equispaced_n = parse_int(args, "equispaced:N");
    m.omega = equispaced(m.equispaced_n);
    m.function = random_spectral_function(m.omega, seed, 1.0 / (2.0 * m.equispaced_n + 1.0));
    m.bandwidth = m.omega.bandwidth();
  } else if (m.kind == "xy") {
    const int l = parse_int(args, "xy:L");
    m.omega = xy_spectrum(l);
    m.function = xy_function(l);
    m.bandwidth = m.omega.bandwidth();
  } else if (m.kind == "jc") {
    const auto v = parse_list(args, "jc:delta,lambda,alpha,cutoff[,norm_tolerance]");
    if ((v.size() != 4 && v.size() != 5) || v[3] != static_cast<int>(v[3])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "jc model needs delta,lambda,alpha,cutoff[,norm_tolerance]");
    }
    m.jc = JCParams{v[0], v[1], v[2], static_cast<int>(v[3])};
    if (v.size() == 5) m.jc->norm_tolerance = v[4];
    m.function = jc_function(*m.jc);
    m.omega = m.function->frequency_set();
    m.bandwidth = jc_bandwidth(v[0], v[1], m.jc->cutoff);
  } else if (m.kind == "shared-z") {
    const auto w = parse_list(args, "shared-z weights");
    if (w.empty()) throw Error(ErrorKind::kInvalidArgument, "shared-z needs weights");
    SharedZModel sz = shared_z_model(w, seed);
    m.bandwidth = sz.bandwidth;
    if (sz.function) {
      m.function = *sz.function;
      m.omega = sz.function->frequency_set();
      m.shared = *sz.multi;
    }
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown model kind '" + m.kind + "'");
  }
  return m;
}

FrequencySet parse_omega(const std::string& spec, std::uint64_t seed) {
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    return frequency_set_from_json(read_json_file(spec));
  }
  if (spec.find(':') != std::string::npos) {
    const Model m = parse_model(spec, seed);
    if (m.omega.empty()) {
      throw Error(ErrorKind::kSizeLimit,
                  "model '" + spec + "' exposes only its bandwidth; no explicit frequency set");
    }
    return m.omega;
  }
  return FrequencySet::from_values(parse_list(spec, "frequency list"));
}

}  // namespace overshift
