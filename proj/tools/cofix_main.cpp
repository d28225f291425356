#include "cofix/config.hpp"
#include "cofix/diagnostics.hpp"
#include "cofix/oracle.hpp"
#include "cofix/trace_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

// Exit codes shared by every subcommand:
//   0 success / step-converged    1 config or I/O error
//   2 stopped at max_iter         3 condition validation failed
//   4 oracle bracketing failed
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kMaxIter = 2;
constexpr int kValidationFailed = 3;
constexpr int kBracketFailed = 4;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_vec(const cofix::Vector& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << fmt(v[i]);
  }
  return os.str();
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            std::optional<long> seed) {
  cofix::ExperimentConfig cfg;
  try {
    cfg = cofix::parse_config_file(config_path);
  } catch (const cofix::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  const cofix::ProblemSpec spec = cofix::build_problem(cfg);
  const cofix::ScheduleBundle bundle = cofix::build_bundle(cfg);
  const cofix::StopRule stop = cofix::build_stop(cfg);
  const cofix::FamilyIndexPolicy policy = cofix::build_policy(cfg);

  if (!cfg.force) {
    const cofix::ConditionReport report = cofix::validate_conditions(bundle, 1000);
    if (!report.all_pass()) {
      std::cerr << "schedule conditions failed:\n" << report.summary();
      return kValidationFailed;
    }
  }

  cofix::SolveResult result;
  try {
    result = cfg.family_kind == 'w'
                 ? cofix::solve_w(spec, bundle, stop, policy, cfg.force)
                 : cofix::solve_k(spec, bundle, stop, policy, cfg.force);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  if (!trace_path.empty()) {
    std::vector<std::string> extra;
    if (seed) extra.push_back("seed = " + std::to_string(*seed));
    try {
      cofix::write_trace_csv_file(trace_path, result.trace, extra, cfg.x_star);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return kConfigError;
    }
  }

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "q = " << fmt_vec(result.q) << '\n'
            << "iterations = " << result.iterations << '\n'
            << "reason = "
            << (result.reason == cofix::StopReason::StepConverged ? "step-converged" : "max-iter")
            << '\n';
  if (cfg.x_star) {
    std::cout << "abs_err_vs_x_star = " << fmt((result.q - *cfg.x_star).norm()) << '\n';
  }
  return result.reason == cofix::StopReason::StepConverged ? kOk : kMaxIter;
}

struct TableInstance {
  std::vector<std::string> labels;
};

TableInstance table_instance(int which) {
  switch (which) {
    case 1: return {{"sin", "cos"}};
    case 2: return {{"sin", "atan"}};
    case 3: return {{"sin", "cos", "atan"}};
  }
  throw std::invalid_argument("--which must be 1, 2 or 3");
}

int cmd_tables(int which, const std::string& out_path) {
  const TableInstance inst = table_instance(which);
  const int n_maps = static_cast<int>(inst.labels.size());

  std::vector<cofix::NonexpansiveMap> maps;
  for (const auto& label : inst.labels) maps.push_back(cofix::NonexpansiveMap::from_label(label));
  std::vector<double> weights;
  for (int i = 0; i < n_maps; ++i) weights.push_back(1.0 / (i + 2));

  const cofix::ScheduleBundle bundle = cofix::default_bundle(n_maps);
  const cofix::StopRule stop{1e-7, 100000};

  std::ostringstream report;
  report << "table " << which << " (";
  for (int i = 0; i < n_maps; ++i) report << (i ? ", " : "") << inst.labels[i];
  report << "), start x0 = 3, eps = 1e-07\n";

  for (char method : {'w', 'k'}) {
    cofix::ProblemSpec spec;
    std::function<cofix::Vector(const cofix::Vector&)> limit_map;
    if (method == 'w') {
      cofix::WFamily fam(maps, weights, cofix::Extension::IdentityPad);
      limit_map = [fam, n_maps](const cofix::Vector& x) {
        return cofix::apply_w(fam, n_maps, x);
      };
      spec.family = std::move(fam);
    } else {
      cofix::KFamily fam(maps, weights);
      limit_map = [fam](const cofix::Vector& x) { return cofix::apply_k_limit(fam, x); };
      spec.family = std::move(fam);
    }

    const cofix::SolveResult result =
        method == 'w' ? cofix::solve_w(spec, bundle, stop) : cofix::solve_k(spec, bundle, stop);

    const double oracle = cofix::bisection_fixed_point(
        [&limit_map](double x) { return limit_map(cofix::make_point({x}))[0]; }, -1.0, 1.5,
        1e-10);

    const cofix::TableTarget& target = cofix::reference_row(which, method);
    const cofix::TableComparison cmp = cofix::compare_to_table(result, target, 1e-3);

    report << "row " << method << ": ours = " << fmt(cmp.ours) << " (" << cmp.our_iterations
           << " iters, "
           << (result.reason == cofix::StopReason::StepConverged ? "step-converged" : "max-iter")
           << ")\n"
           << "       reference = " << fmt(cmp.reference) << " (" << cmp.ref_iterations
           << " iters), |ours - reference| = " << fmt(cmp.abs_err) << '\n'
           << "       oracle fixed point = " << fmt(oracle)
           << ", |ours - oracle| = " << fmt(std::abs(cmp.ours - oracle))
           << ", |reference - oracle| = " << fmt(std::abs(cmp.reference - oracle)) << '\n';
    report << "       reference images at " << fmt(target.x_star) << ":";
    for (std::size_t i = 0; i < target.map_images.size(); ++i) {
      report << (i ? ", " : " ") << target.map_images[i].first << " -> "
             << fmt(target.map_images[i].second) << " (err " << fmt(cmp.image_errors[i]) << ")";
    }
    report << '\n';
    if (std::abs(cmp.reference - oracle) > 1e-3)
      report << "       note: the reference limit is not a fixed point of the frozen cascade; "
                "the oracle value is the self-consistent target\n";
  }

  if (out_path.empty() || out_path == "-") {
    std::cout << report.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open '" << out_path << "' for writing\n";
      return kConfigError;
    }
    out << report.str();
  }
  return kOk;
}

int cmd_validate(const std::string& config_path, int horizon) {
  cofix::ExperimentConfig cfg;
  try {
    cfg = cofix::parse_config_file(config_path);
  } catch (const cofix::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  const cofix::ConditionReport report =
      cofix::validate_conditions(cofix::build_bundle(cfg), horizon);
  std::cout << report.summary();
  std::cout << (report.all_pass() ? "all conditions pass" : "conditions failed") << '\n';
  return report.all_pass() ? kOk : kValidationFailed;
}

int cmd_oracle(const std::string& map_label, double lo, double hi, double tol) {
  cofix::NonexpansiveMap map = cofix::NonexpansiveMap::from_label(map_label);
  auto scalar = [&map](double x) { return map(cofix::make_point({x}))[0]; };
  double root = 0.0;
  try {
    root = cofix::bisection_fixed_point(scalar, lo, hi, tol);
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << '\n';
    return kBracketFailed;
  }
  std::cout << "fixed_point = " << fmt(root) << '\n'
            << "residual = " << fmt(std::abs(scalar(root) - root)) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite viscosity iterations for common fixed points"};
  app.require_subcommand(1);

  std::string config_path, trace_path, out_path;
  std::optional<long> seed;
  int which = 0;
  int horizon = 1000;
  std::string map_label;
  double lo = 0.0, hi = 0.0, tol = 1e-10;

  CLI::App* run = app.add_subcommand("run", "solve a configured problem");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--trace", trace_path, "write the iteration trace CSV here");
  run->add_option("--seed", seed, "echoed into the trace header");

  CLI::App* tables = app.add_subcommand("tables", "reproduce a published comparison row");
  tables->add_option("--which", which, "table id (1, 2 or 3)")->required();
  tables->add_option("--out", out_path, "report file, - for stdout");

  CLI::App* validate = app.add_subcommand("validate", "check the schedule conditions");
  validate->add_option("--config", config_path, "config file")->required();
  validate->add_option("--horizon", horizon, "numeric check horizon (>= 100)");

  CLI::App* oracle = app.add_subcommand("oracle", "bisection fixed point of a 1-d map");
  oracle->add_option("map", map_label, "sin, cos, atan, id or proj:lo,hi")->required();
  oracle->add_option("lo", lo, "bracket lower end")->required();
  oracle->add_option("hi", hi, "bracket upper end")->required();
  oracle->add_option("tol", tol, "bracket width target");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, trace_path, seed);
    if (tables->parsed()) return cmd_tables(which, out_path);
    if (validate->parsed()) return cmd_validate(config_path, horizon);
    if (oracle->parsed()) return cmd_oracle(map_label, lo, hi, tol);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
