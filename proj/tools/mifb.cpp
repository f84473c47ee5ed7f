// Command-line front end: parameter validation, single solves, reproduction
// reproduction suites, and rate fitting of exported traces.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mifb/errors.hpp"
#include "mifb/experiments.hpp"
#include "mifb/io.hpp"
#include "mifb/rng.hpp"

namespace {

using namespace mifb;

// Exit codes shared across subcommands.
constexpr int kOk = 0;
constexpr int kInadmissible = 1;
constexpr int kUsageOrIo = 2;
constexpr int kMaxIters = 3;
constexpr int kNumericalFailure = 4;

int thread_cap() {
  if (const char* env = std::getenv("MIFB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 4u));
}

struct CommonOpts {
  std::string instance_path;
  std::string builtin;
  std::string params_path;
  std::string preset_name;
  uint64_t seed = 42;
  std::string out_dir = "out";
  bool full = false;
  bool force = false;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

// Default stepsize policy per instance kind, as fractions of 1/L.
double default_gamma(InstanceKind kind, double L) {
  switch (kind) {
    case InstanceKind::poly1d: return 0.5 / L;
    case InstanceKind::scad_ls: return 0.1 / L;
    case InstanceKind::l1_ls: return (1.0 - 1e-6) / L;
  }
  return 0.5 / L;
}

struct ResolvedRun {
  InstanceSpec spec;
  CompositeProblem problem;
  Vector x0;
  MifbParams params;
  std::string params_label;
};

ResolvedRun resolve(const CommonOpts& opts) {
  ResolvedRun r;
  if (opts.instance_path.empty() == opts.builtin.empty()) {
    throw std::invalid_argument("exactly one of --instance and --builtin is required");
  }
  if (!opts.instance_path.empty()) {
    LoadedInstance loaded = instance_from_json(read_json_file(opts.instance_path));
    r.spec = loaded.spec;
    r.problem = std::move(loaded.problem);
  } else {
    ComparisonRun suite = make_builtin_suite(opts.builtin, opts.seed, opts.full);
    r.spec = suite.spec;
    r.problem = std::move(suite.problem);
    r.x0 = std::move(suite.x0);
  }
  if (r.x0.size() == 0) {
    if (r.spec.kind == InstanceKind::poly1d) {
      r.x0 = Vector::Constant(1, 0.9);
    } else {
      Rng rng(opts.seed + 1);
      r.x0 = Vector::Zero(r.problem.f.dim);
      for (int i = 0; i < r.problem.f.dim; ++i) r.x0(i) = rng.normal();
    }
  }

  if (opts.params_path.empty() == opts.preset_name.empty()) {
    throw std::invalid_argument("exactly one of --params and --preset is required");
  }
  if (!opts.params_path.empty()) {
    r.params = params_from_json(read_json_file(opts.params_path));
    r.params_label = opts.params_path;
  } else {
    r.params = preset(opts.preset_name, 0.3, 0.1);
    const double g = default_gamma(r.spec.kind, r.problem.f.lipschitz);
    r.params.gamma = [g](int) { return g; };
    r.params_label = "preset:" + opts.preset_name;
  }
  if (opts.tol) r.params.tol_delta_x = *opts.tol;
  if (opts.max_iters) r.params.max_iters = *opts.max_iters;
  r.params.force = opts.force;
  return r;
}

void print_admissibility(const AdmissibilityReport& rep) {
  std::printf("beta_inf = %.6g\n", rep.beta_inf);
  for (size_t i = 0; i < rep.alpha_sup.size(); ++i) {
    std::printf("alpha_sup[%zu] = %.6g\n", i, rep.alpha_sup[i]);
  }
  std::printf("delta = %.6g  (mu = %g, nu = %g)\n", rep.delta, rep.mu, rep.nu);
  std::printf("admissible: %s\n", rep.admissible ? "yes" : "no");
}

int cmd_validate(const CommonOpts& opts) {
  ResolvedRun r = resolve(opts);
  const AdmissibilityReport rep =
      compute_admissibility(r.params, r.problem.f.lipschitz,
                            r.params.constant_in_k ? 1 : r.params.max_iters);
  print_admissibility(rep);
  return rep.admissible ? kOk : kInadmissible;
}

int cmd_solve(const CommonOpts& opts) {
  ResolvedRun r = resolve(opts);
  SolveTrace trace;
  try {
    trace = solve(r.problem, r.params, r.x0);
  } catch (const inadmissible_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInadmissible;
  }

  ComparisonRun run;
  run.suite = opts.builtin.empty()
                  ? std::string(instance_kind_name(r.spec.kind))
                  : opts.builtin;
  run.spec = r.spec;
  run.problem = r.problem;
  run.x0 = r.x0;
  if (r.spec.kind == InstanceKind::poly1d) run.known_phi_star = 0.0;
  run.choices.push_back({r.params_label == "preset:none" ? "none" : "run", r.params});
  run.traces.push_back(trace);
  run.phi_star.push_back(run.known_phi_star
                             ? *run.known_phi_star
                             : estimate_phi_star(trace.phi, static_cast<int>(trace.phi.size())));
  run.reports.push_back(RateReport{});
  export_results(run, opts.out_dir);

  std::printf("iterations: %d  stop: %s  phi_final: %.12g\n", trace.iterations,
              stop_reason_name(trace.reason), trace.phi.back());
  std::printf("artifacts written to %s\n", opts.out_dir.c_str());
  switch (trace.reason) {
    case StopReason::tolerance: return kOk;
    case StopReason::max_iters: return kMaxIters;
    case StopReason::numerical_failure: return kNumericalFailure;
  }
  return kNumericalFailure;
}

int cmd_reproduce(const CommonOpts& opts) {
  if (opts.builtin.empty()) {
    throw std::invalid_argument("reproduce requires --builtin (poly-p4, poly-p18, scad-ls, l1-ls)");
  }
  ComparisonRun run = make_builtin_suite(opts.builtin, opts.seed, opts.full);
  run_comparison(run, thread_cap());
  export_results(run, opts.out_dir);

  bool all_match = true;
  std::printf("%-20s %-12s %-12s %-10s %s\n", "params", "fitted", "predicted",
              "r2", "detail");
  for (size_t i = 0; i < run.choices.size(); ++i) {
    const RateReport& rep = run.reports[i];
    const bool match = rep.predicted_regime && rep.regime == *rep.predicted_regime;
    all_match = all_match && match;
    std::string detail;
    if (rep.linear_factor) detail = "q=" + std::to_string(*rep.linear_factor);
    if (rep.power_exponent) detail = "slope=" + std::to_string(*rep.power_exponent);
    std::printf("%-20s %-12s %-12s %-10.4f %s%s\n", run.choices[i].name.c_str(),
                regime_name(rep.regime),
                rep.predicted_regime ? regime_name(*rep.predicted_regime) : "-",
                rep.r_squared, detail.c_str(), match ? "" : "  [MISMATCH]");
  }
  std::printf("artifacts written to %s\n", opts.out_dir.c_str());
  return all_match ? kOk : kInadmissible;
}

struct FitOpts {
  std::string csv_path;
  std::optional<double> theta;
  std::optional<double> phi_star;
  double tail_fraction = 0.5;
};

int cmd_fit(const FitOpts& opts) {
  std::ifstream in(opts.csv_path);
  if (!in) {
    std::fprintf(stderr, "cannot open: %s\n", opts.csv_path.c_str());
    return kUsageOrIo;
  }
  std::string header;
  if (!std::getline(in, header)) {
    std::fprintf(stderr, "empty CSV: %s\n", opts.csv_path.c_str());
    return kUsageOrIo;
  }
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  const auto phi_it = std::find(cols.begin(), cols.end(), "phi");
  if (phi_it == cols.end()) {
    std::fprintf(stderr, "CSV has no phi column\n");
    return kUsageOrIo;
  }
  const size_t phi_col = static_cast<size_t>(phi_it - cols.begin());

  std::vector<double> phi;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    size_t col = 0;
    bool found = false;
    while (std::getline(ss, field, ',')) {
      if (col++ == phi_col) {
        try {
          phi.push_back(std::stod(field));
        } catch (const std::exception&) {
          std::fprintf(stderr, "malformed CSV value: %s\n", field.c_str());
          return kUsageOrIo;
        }
        found = true;
        break;
      }
    }
    if (!found) {
      std::fprintf(stderr, "malformed CSV row: %s\n", line.c_str());
      return kUsageOrIo;
    }
  }
  if (phi.empty()) {
    std::fprintf(stderr, "CSV has no data rows\n");
    return kUsageOrIo;
  }

  const double star = opts.phi_star
                          ? *opts.phi_star
                          : estimate_phi_star(phi, static_cast<int>(phi.size()));
  const size_t gap_count = opts.phi_star ? phi.size() - 1 : (phi.size() - 1) / 2;
  std::vector<double> gaps;
  gaps.reserve(gap_count);
  for (size_t j = 0; j < gap_count; ++j) gaps.push_back(std::max(phi[j + 1] - star, 0.0));

  RateReport report;
  try {
    report = fit_rate(gaps, opts.tail_fraction);
  } catch (const insufficient_data_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kUsageOrIo;
  }
  if (opts.theta) {
    auto [regime, exponent] = predict_regime(*opts.theta);
    report.predicted_regime = regime;
    report.predicted_exponent = exponent;
  }
  std::printf("%s\n", rate_report_to_json(report).dump(2).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-step inertial forward-backward solver"};
  app.require_subcommand(1);

  CommonOpts opts;
  FitOpts fit_opts;

  const auto add_common = [&](CLI::App* sub, bool with_params) {
    sub->add_option("--instance", opts.instance_path, "instance JSON document");
    sub->add_option("--builtin", opts.builtin,
                    "builtin instance/suite: poly-p4, poly-p18, scad-ls, l1-ls");
    if (with_params) {
      sub->add_option("--params", opts.params_path, "parameter JSON document");
      sub->add_option("--preset", opts.preset_name,
                      "parameter preset: none, heavy-ball, ipiano, ifb-equal, two-step");
    }
    sub->add_option("--seed", opts.seed, "RNG seed (default 42, recorded in output)");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_flag("--full", opts.full, "large least-squares instances (500x1000)");
    sub->add_flag("--force", opts.force, "run even when delta <= 0");
    double tol_val = 0.0;
    sub->add_option_function<double>(
        "--tol", [&opts](double v) { opts.tol = v; }, "stopping threshold on ||x_k - x_{k-1}||");
    (void)tol_val;
    sub->add_option_function<int>(
        "--max-iters", [&opts](int v) { opts.max_iters = v; }, "iteration cap");
  };

  CLI::App* validate = app.add_subcommand("validate", "check parameter admissibility");
  add_common(validate, true);
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one instance");
  add_common(solve_cmd, true);
  CLI::App* reproduce = app.add_subcommand("reproduce", "run a builtin comparison suite");
  add_common(reproduce, false);
  CLI::App* fit = app.add_subcommand("fit", "fit a convergence regime to a trace CSV");
  fit->add_option("csv", fit_opts.csv_path, "trace CSV with k and phi columns")->required();
  fit->add_option_function<double>(
      "--theta", [&fit_opts](double v) { fit_opts.theta = v; }, "declared KL exponent");
  fit->add_option_function<double>(
      "--phi-star", [&fit_opts](double v) { fit_opts.phi_star = v; },
      "known limit value (otherwise estimated from the trace tail)");
  fit->add_option("--tail-fraction", fit_opts.tail_fraction, "fraction of points fitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageOrIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(opts);
    if (solve_cmd->parsed()) return cmd_solve(opts);
    if (reproduce->parsed()) return cmd_reproduce(opts);
    if (fit->parsed()) return cmd_fit(fit_opts);
  } catch (const inadmissible_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInadmissible;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageOrIo;
  }
  return kUsageOrIo;
}
