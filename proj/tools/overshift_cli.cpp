// overshift: synthesize, verify and benchmark parameter-shift rules.
//
//   overshift synthesize --omega equispaced:20 --method l1 --grid odd:40
//   overshift estimate --model xy:10 --method triangle --shots 100000 --seed 1
//   overshift sweep norm-vs-p --n 20 --out norms.csv
//
// Exit codes: 0 ok, 2 infeasible, 3 ill-conditioned, 4 insufficient shots,
// 1 anything else.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "overshift/analytic.hpp"
#include "overshift/applications.hpp"
#include "overshift/errors.hpp"
#include "overshift/io.hpp"
#include "overshift/kernel.hpp"
#include "overshift/l1opt.hpp"
#include "overshift/linsys.hpp"
#include "overshift/models.hpp"
#include "overshift/stochastic.hpp"

namespace {

using namespace overshift;

constexpr double kPi = std::numbers::pi;

struct GridSpec {
  GridKind kind = GridKind::kOdd;
  int p = 0;  // 0: twice the number of positive frequencies
  double b = kPi;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kInvalidArgument, "bad number '" + s + "' in " + what);
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != std::floor(v)) throw Error(ErrorKind::kInvalidArgument, what + " needs an integer");
  return static_cast<int>(v);
}

GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  if (spec.empty()) return g;
  const auto parts = split(spec, ':');
  if (parts.empty() || parts.size() > 3) {
    throw Error(ErrorKind::kInvalidArgument, "--grid expects kind:P[:B]");
  }
  g.kind = grid_kind_from_string(parts[0]);
  if (parts.size() > 1) g.p = to_int(parts[1], "--grid P");
  if (parts.size() > 2) g.b = to_double(parts[2], "--grid B");
  return g;
}

// kernel:<family>:<B> and approx:<L>,<P>.
struct MethodSpec {
  std::string name;
  KernelSpec kernel{KernelFamily::kCauchy, 1.0};
  int approx_l = 0;
  int approx_p = 0;
};

MethodSpec parse_method(const std::string& spec) {
  MethodSpec m;
  const auto colon = spec.find(':');
  m.name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (m.name == "kernel") {
    const auto parts = split(args, ':');
    if (parts.size() != 2) throw Error(ErrorKind::kInvalidArgument, "use kernel:<family>:<B>");
    m.kernel = {kernel_family_from_string(parts[0]), to_double(parts[1], "kernel width")};
    validate(m.kernel);
  } else if (m.name == "approx") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw Error(ErrorKind::kInvalidArgument, "use approx:<L>,<P>");
    m.approx_l = to_int(parts[0], "approx L");
    m.approx_p = to_int(parts[1], "approx P");
  } else if (!args.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "method '" + m.name + "' takes no arguments");
  }
  return m;
}

struct Problem {
  FrequencySet omega;
  std::optional<SpectralFunction> function;
  double bandwidth = 0.0;
  int equispaced_n = 0;
  std::optional<SharedZFunction> shared;
};

Problem load_problem(const std::string& model, const std::string& omega, std::uint64_t seed) {
  Problem pr;
  if (!model.empty()) {
    Model m = parse_model(model, seed);
    pr.omega = m.omega;
    pr.function = m.function;
    pr.bandwidth = m.bandwidth;
    pr.equispaced_n = m.equispaced_n;
    pr.shared = m.shared;
  }
  if (!omega.empty()) {
    pr.omega = parse_omega(omega, seed);
    pr.bandwidth = std::max(pr.bandwidth, pr.omega.bandwidth());
    if (omega.rfind("equispaced:", 0) == 0) pr.equispaced_n = to_int(omega.substr(11), "N");
  }
  if (model.empty() && omega.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "give --model or --omega");
  }
  return pr;
}

LinearSystem grid_system(const FrequencySet& omega, const GridSpec& g, bool general) {
  const int n = static_cast<int>(omega.positive_part().size());
  const int p = g.p > 0 ? g.p : std::max(1, 2 * n);
  const std::vector<double> grid = shift_grid(g.kind, p, g.b);
  if (general) return assemble(omega, grid, false);
  return assemble(omega, positive_half(grid), true);
}

// Deterministic rule for a method, or nothing for sampling-only methods.
std::optional<ShiftRule> deterministic_rule(const MethodSpec& m, const Problem& pr,
                                            const GridSpec& g, bool general) {
  if (m.name == "l1" || m.name == "l2" || m.name == "tv") {
    const LinearSystem sys = grid_system(pr.omega, g, general);
    if (!feasible(sys)) {
      throw Error(ErrorKind::kNoSolution,
                  "grid cannot satisfy all " + std::to_string(sys.matrix.rows()) +
                      " constraints (rank test failed); increase P or change the grid width");
    }
    if (m.name == "l1") return solve_l1(sys);
    if (m.name == "l2") return solve_l2(sys);
    return solve_tv(sys);
  }
  if (m.name == "equispaced") {
    if (pr.equispaced_n <= 0) {
      throw Error(ErrorKind::kInvalidArgument, "method equispaced needs an equispaced:N model");
    }
    return equispaced_rule(pr.equispaced_n);
  }
  if (m.name == "approx") {
    if (!(pr.bandwidth > 0.0)) throw Error(ErrorKind::kInvalidArgument, "approx needs a bandwidth");
    return solve_l1(approx_bandwidth_system(pr.bandwidth, m.approx_l, m.approx_p, g.b));
  }
  return std::nullopt;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string model;
  std::string omega;
  std::string method = "l1";
  std::string grid;
  std::string out;
  std::uint64_t seed = 0;
  bool general = false;
};

int cmd_synthesize(const CommonOptions& o) {
  const Problem pr = load_problem(o.model, o.omega, o.seed);
  const MethodSpec m = parse_method(o.method);
  const GridSpec g = parse_grid(o.grid);
  Json doc;
  if (auto rule = deterministic_rule(m, pr, g, o.general)) {
    doc["rule"] = to_json(*rule);
    Json report = {{"l1_norm", rule->l1_norm()}};
    if (!pr.omega.empty()) report["residual"] = verify(*rule, pr.omega);
    if (m.name == "approx") {
      report["grid_residual"] =
          verify(*rule, approx_bandwidth_frequencies(pr.bandwidth, m.approx_l));
    }
    doc["report"] = report;
  } else if (m.name == "triangle" || m.name == "zigzag") {
    const StochasticRule r = m.name == "triangle" ? triangle_stochastic_rule(pr.bandwidth)
                                                  : zigzag_stochastic_rule(pr.bandwidth);
    doc["rule"] = {{"method", r.method},
                   {"bandwidth", pr.bandwidth},
                   {"total_mass", r.total_mass},
                   {"weight_bound", r.weight_bound}};
    doc["report"] = {{"l1_norm", r.total_mass}};
  } else if (m.name == "kernel") {
    const KernelWeights kw = kernel_weights(pr.omega, m.kernel);
    double res = 0.0;
    double norm_bound = 0.0;
    for (std::size_t i = 0; i < kw.y.size(); ++i) {
      const double w = kw.omega.frequencies()[i];
      res = std::max(res, std::abs(kernel_interpolant(kw, w) - w));
      if (w > 0.0) norm_bound += 2.0 * std::abs(kw.y[i]);
    }
    doc["rule"] = {{"method", "kernel"},
                   {"family", to_string(kw.spec.family)},
                   {"width", kw.spec.width},
                   {"frequencies", kw.omega.frequencies()},
                   {"y", kw.y}};
    doc["report"] = {{"residual", res},
                     {"weight_bound", norm_bound},
                     {"condition", kw.condition},
                     {"max_gershgorin",
                      *std::max_element(kw.gershgorin.begin(), kw.gershgorin.end())}};
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown method '" + m.name + "'");
  }
  write_output(o.out, doc.dump(2) + "\n");
  return 0;
}

GradientEstimate run_estimate(const Problem& pr, const MethodSpec& m, const GridSpec& g,
                              bool general, const MeasurementModel& meas, double theta,
                              long shots, Rng& rng) {
  if (m.name == "triangle") return triangle_estimate(pr.bandwidth, meas, theta, shots, rng);
  if (m.name == "triangle-grouped") {
    return triangle_estimate(pr.bandwidth, meas, theta, shots, rng, true);
  }
  if (m.name == "zigzag") return zigzag_estimate(pr.bandwidth, meas, theta, shots, rng);
  if (m.name == "kernel") return kernel_estimate(m.kernel, pr.omega, meas, theta, shots, rng);
  if (m.name == "equispaced-stochastic") {
    return equispaced_stochastic_estimate(pr.equispaced_n, meas, theta, shots, rng);
  }
  if (m.name == "chain-rule") {
    if (!pr.shared) throw Error(ErrorKind::kInvalidArgument, "chain-rule needs a shared-z model");
    return chain_rule_estimate(*pr.shared, theta, shots, rng);
  }
  // stochastic-<l1|l2|tv|...>: sample the signed split of a deterministic rule.
  if (m.name.rfind("stochastic-", 0) == 0) {
    MethodSpec inner = m;
    inner.name = m.name.substr(11);
    const auto rule = deterministic_rule(inner, pr, g, general);
    if (!rule) throw Error(ErrorKind::kInvalidArgument, "no deterministic rule for " + inner.name);
    return stochastic_estimate(split_signed(*rule), meas, theta, shots, rng);
  }
  const auto rule = deterministic_rule(m, pr, g, general);
  if (!rule) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + m.name + "'");
  return deterministic_estimate(*rule, meas, theta, allocate_shots(*rule, shots), rng);
}

int cmd_estimate(const CommonOptions& o, const std::string& rule_path, double theta, long shots,
                 bool noiseless) {
  const Problem pr = load_problem(o.model, o.omega, o.seed);
  SpectralFunction f;
  if (pr.function) {
    f = *pr.function;
  } else if (!pr.omega.empty()) {
    f = random_spectral_function(pr.omega, o.seed, 1.0);
  } else {
    throw Error(ErrorKind::kInvalidModel, "model has no explicit function to measure");
  }
  const MeasurementModel meas(f, f.abs_sum() > 0.0 ? f.abs_sum() : 1.0, noiseless);
  Rng rng(o.seed);
  GradientEstimate e;
  if (!rule_path.empty()) {
    const ShiftRule rule = shift_rule_from_json(read_json_file(rule_path).value("rule", Json()));
    e = deterministic_estimate(rule, meas, theta, allocate_shots(rule, shots), rng);
  } else {
    e = run_estimate(pr, parse_method(o.method), parse_grid(o.grid), o.general, meas, theta,
                     shots, rng);
  }
  write_output(o.out, to_json(e).dump() + "\n");
  return 0;
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Each row owns its
// output slot, so the result does not depend on the worker count.
template <class F>
void parallel_rows(int n, int threads, F body) {
  threads = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct SweepOptions {
  int n = 20;
  int points = 41;
  int threads = 1;
  long shots = 100000;
  double delta = 0.2;
  double lambda = 0.5;
  double alpha = 1.0;
  int rule_cutoff = 10;
  int eval_cutoff = 100;
};

int sweep_norm_vs_p(const CommonOptions& o, const SweepOptions& s) {
  const GridSpec g = parse_grid(o.grid);
  const FrequencySet omega = equispaced(s.n);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(3 * s.n + 1));
  std::vector<std::string> errors(rows.size());
  parallel_rows(static_cast<int>(rows.size()), s.threads, [&](int i) {
    const int p = s.n + i;
    try {
      const LinearSystem sys =
          assemble(omega, positive_half(shift_grid(g.kind, p, g.b)), true);
      const ShiftRule l1 = solve_l1(sys);
      const ShiftRule l2 = solve_l2(sys);
      rows[i] = {static_cast<double>(p), static_cast<double>(p) / s.n, l1.l1_norm(),
                 l2.l1_norm(), verify(l1, omega)};
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  std::ostringstream out;
  CsvWriter csv(out, "norm-vs-p",
                {{"n", std::to_string(s.n)},
                 {"grid", o.grid.empty() ? "odd" : o.grid},
                 {"b", format_double(g.b)}},
                {"p", "p_over_n", "l1_norm", "l2_norm", "l1_residual"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!errors[i].empty()) {
      const double nan = std::nan("");
      csv.row(std::vector<double>{static_cast<double>(s.n + i), (s.n + i) / double(s.n), nan,
                                  nan, nan});
    } else {
      csv.row(rows[i]);
    }
  }
  write_output(o.out, out.str());
  return 0;
}

int sweep_dft(const CommonOptions& o, const SweepOptions& s) {
  GridSpec g = parse_grid(o.grid);
  if (g.p == 0) g.p = 8 * s.n;
  const FrequencySet omega = equispaced(s.n);
  const ShiftRule rule = solve_l1(assemble(omega, positive_half(shift_grid(g.kind, g.p, g.b)), true));
  const int max_h = std::max(g.p, 2 * s.n);
  const auto coeffs = dft_coefficients(rule, max_h);
  std::ostringstream out;
  CsvWriter csv(out, "dft",
                {{"n", std::to_string(s.n)},
                 {"p", std::to_string(g.p)},
                 {"l1_norm", format_double(rule.l1_norm())}},
                {"harmonic", "re", "im", "in_omega", "triangle_wave"});
  for (int h = 0; h <= max_h; ++h) {
    csv.row(std::vector<double>{static_cast<double>(h), coeffs[h].real(), coeffs[h].imag(),
                                h <= s.n ? 1.0 : 0.0, triangle_response(h, s.n)});
  }
  write_output(o.out, out.str());
  return 0;
}

int sweep_variance_profile(const CommonOptions& o, const SweepOptions& s) {
  const std::string model_name = o.model.empty() ? "xy:10" : o.model;
  const Model model = parse_model(model_name, o.seed);
  if (!model.function) throw Error(ErrorKind::kInvalidModel, "model has no explicit function");
  const SpectralFunction& f = *model.function;
  const MeasurementModel meas(f);
  const int n = static_cast<int>(model.omega.positive_part().size());
  const GridSpec g = parse_grid(o.grid.empty() ? "odd:0:" + format_double(2 * kPi) : o.grid);
  std::vector<std::pair<std::string, ShiftRule>> rules;
  for (int mult : {1, 2, 4}) {
    GridSpec gm = g;
    gm.p = mult * n;
    rules.push_back({"l1_p" + std::to_string(mult) + "n",
                     solve_l1(grid_system(model.omega, gm, false))});
  }
  const KernelWeights cauchy = kernel_weights(model.omega, {KernelFamily::kCauchy, 0.5});
  const int methods = static_cast<int>(rules.size()) + 2;
  std::vector<GradientEstimate> results(static_cast<std::size_t>(s.points * methods));
  const Rng root(o.seed);
  parallel_rows(s.points * methods, s.threads, [&](int idx) {
    const int k = idx / methods;
    const int which = idx % methods;
    const double theta = -kPi + 2 * kPi * k / std::max(1, s.points - 1);
    Rng rng = root.substream(static_cast<std::uint64_t>(idx));
    if (which < static_cast<int>(rules.size())) {
      const ShiftRule& r = rules[which].second;
      results[idx] = deterministic_estimate(r, meas, theta, allocate_shots(r, s.shots), rng);
    } else if (which == static_cast<int>(rules.size())) {
      results[idx] = triangle_estimate(f.bandwidth(), meas, theta, s.shots, rng);
    } else {
      results[idx] = kernel_estimate(cauchy, meas, theta, s.shots, rng);
    }
  });
  std::ostringstream out;
  CsvWriter csv(out, "variance-profile",
                {{"model", model_name},
                 {"positive_frequencies", std::to_string(n)},
                 {"shots", std::to_string(s.shots)},
                 {"seed", std::to_string(o.seed)}},
                {"theta", "method", "exact", "mean", "stderr", "sd_per_shot"});
  for (int idx = 0; idx < s.points * methods; ++idx) {
    const int k = idx / methods;
    const int which = idx % methods;
    const double theta = -kPi + 2 * kPi * k / std::max(1, s.points - 1);
    const std::string name = which < static_cast<int>(rules.size())
                                 ? rules[which].first
                                 : (which == static_cast<int>(rules.size()) ? "triangle"
                                                                            : "kernel_cauchy");
    const GradientEstimate& e = results[idx];
    csv.row(std::vector<std::string>{format_double(theta), name,
                                     format_double(exact_derivative(f, theta)),
                                     format_double(e.mean), format_double(e.std_error),
                                     format_double(e.std_error * std::sqrt(double(e.shots)))});
  }
  write_output(o.out, out.str());
  return 0;
}

int sweep_jc_bias(const CommonOptions& o, const SweepOptions& s) {
  const JCParams eval_params{s.delta, s.lambda, s.alpha, s.eval_cutoff};
  const double lam = jc_bandwidth(s.delta, s.lambda, s.rule_cutoff);
  const GridSpec g = parse_grid(o.grid);
  const ShiftRule approx = solve_l1(approx_bandwidth_system(lam, 100, 1000, g.b));
  const SpectralFunction f = jc_function(eval_params);
  // Z outcomes are +-1.
  const MeasurementModel meas(f, 1.0);
  std::vector<GradientEstimate> tri(static_cast<std::size_t>(s.points));
  std::vector<GradientEstimate> app(static_cast<std::size_t>(s.points));
  const Rng root(o.seed);
  const auto theta_at = [&](int k) { return 10.0 * k / std::max(1, s.points - 1); };
  parallel_rows(s.points, s.threads, [&](int k) {
    Rng r1 = root.substream(2 * static_cast<std::uint64_t>(k));
    Rng r2 = root.substream(2 * static_cast<std::uint64_t>(k) + 1);
    tri[k] = triangle_estimate(lam, meas, theta_at(k), s.shots, r1);
    app[k] = deterministic_estimate(approx, meas, theta_at(k), allocate_shots(approx, s.shots), r2);
  });
  std::ostringstream out;
  CsvWriter csv(out, "jc-bias",
                {{"delta", format_double(s.delta)},
                 {"lambda", format_double(s.lambda)},
                 {"alpha", format_double(s.alpha)},
                 {"rule_cutoff", std::to_string(s.rule_cutoff)},
                 {"eval_cutoff", std::to_string(s.eval_cutoff)},
                 {"bandwidth", format_double(lam)},
                 {"approx_l1_norm", format_double(approx.l1_norm())},
                 {"shots", std::to_string(s.shots)}},
                {"theta", "exact", "triangle_mean", "triangle_stderr", "triangle_expected",
                 "approx_mean", "approx_stderr", "approx_expected"});
  for (int k = 0; k < s.points; ++k) {
    const double theta = theta_at(k);
    // Noiseless means of both rules, for the bias columns.
    std::complex<double> acc = 0.0;
    for (const auto& t : f.terms()) {
      acc += t.coeff * std::complex<double>(0.0, triangle_response(t.omega, lam)) *
             std::polar(1.0, t.omega * theta);
    }
    csv.row(std::vector<double>{theta, exact_derivative(f, theta), tri[k].mean, tri[k].std_error,
                                acc.real(), app[k].mean, app[k].std_error,
                                apply_rule(approx, f, theta)});
  }
  write_output(o.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize, verify and benchmark parameter-shift rules"};
  app.require_subcommand(1);

  CommonOptions common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", common.model,
                    "equispaced:N, xy:L, jc:delta,lambda,alpha,cutoff[,tol], shared-z:w1,...");
    sub->add_option("--omega", common.omega, "model name, JSON file, or list w1,w2,...");
    sub->add_option("--grid", common.grid, "kind:P[:B] with kind odd, even or uniform");
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_flag("--general", common.general, "use the general (non-symmetric) system");
  };

  auto* synth = app.add_subcommand("synthesize", "build a shift rule and report its quality");
  add_common(synth);
  synth->add_option("--method", common.method,
                    "l1, l2, tv, triangle, zigzag, kernel:<family>:<B>, equispaced, approx:<L>,<P>");

  auto* est = app.add_subcommand("estimate", "estimate f'(theta) from simulated shots");
  add_common(est);
  std::string rule_path;
  double theta = 0.0;
  long shots = 10000;
  bool noiseless = false;
  est->add_option("--method", common.method,
                  "l1, l2, tv, equispaced, approx:<L>,<P>, stochastic-<rule>, triangle, "
                  "triangle-grouped, zigzag, kernel:<family>:<B>, equispaced-stochastic, chain-rule");
  est->add_option("--rule", rule_path, "rule JSON written by synthesize");
  est->add_option("--theta", theta, "evaluation point");
  est->add_option("--shots", shots, "total measurement shots");
  est->add_flag("--noiseless", noiseless, "return exact expectation values");

  auto* sweep = app.add_subcommand("sweep", "CSV tables for norm-vs-p, dft, variance-profile, jc-bias");
  add_common(sweep);
  std::string experiment;
  SweepOptions so;
  sweep->add_option("experiment", experiment, "norm-vs-p, dft, variance-profile or jc-bias")
      ->required()
      ->check(CLI::IsMember({"norm-vs-p", "dft", "variance-profile", "jc-bias"}));
  sweep->add_option("--n", so.n, "number of equispaced frequencies");
  sweep->add_option("--points", so.points, "theta points");
  sweep->add_option("--shots", so.shots, "shots per estimate");
  sweep->add_option("--threads", so.threads, "worker threads");
  sweep->add_option("--delta", so.delta, "JC detuning");
  sweep->add_option("--lambda", so.lambda, "JC coupling");
  sweep->add_option("--alpha", so.alpha, "JC coherent amplitude");
  sweep->add_option("--rule-cutoff", so.rule_cutoff, "JC cutoff for the bandwidth estimate");
  sweep->add_option("--eval-cutoff", so.eval_cutoff, "JC cutoff for function values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) return cmd_synthesize(common);
    if (*est) return cmd_estimate(common, rule_path, theta, shots, noiseless);
    if (experiment == "norm-vs-p") return sweep_norm_vs_p(common, so);
    if (experiment == "dft") return sweep_dft(common, so);
    if (experiment == "variance-profile") return sweep_variance_profile(common, so);
    return sweep_jc_bias(common, so);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
