#pragma once

#include "cofix/solver.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cofix {

/// One parse problem, tied to a 1-based input line (0 for file-level issues).
struct ConfigIssue {
  int line = 0;
  std::string message;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
  static std::string render(const std::vector<ConfigIssue>& issues);
  std::vector<ConfigIssue> issues_;
};

/// Fully resolved run description. Every field is populated after a
/// successful parse: omitted keys take the documented defaults, so the echo
/// always shows the complete effective configuration.
struct ExperimentConfig {
  char family_kind = 'w';  // 'w' or 'k'
  std::vector<std::string> maps;
  std::vector<double> weights;
  Extension extend = Extension::IdentityPad;
  std::string set_spec = "all";  // all | box:lo,hi | ball:c1,...,cd,r
  Vector x0 = make_point({3.0});
  std::string f_spec = "linear:0.5";
  double gamma = 1.0;
  double a_scale = 1.0;
  ScalarSchedule alpha = ScalarSchedule::power(1.0, 1.0);
  ScalarSchedule beta = ScalarSchedule::constant(0.1);
  ScalarSchedule gamma_seq = ScalarSchedule::constant(0.5);
  ScalarSchedule delta = ScalarSchedule::constant(0.5);
  std::vector<double> lambda_row;
  double d = 0.3;
  double eps = 1e-7;
  long max_iter = 100000;
  std::optional<Vector> x_star;
  bool force = false;
  std::string index_policy = "growing";
};

/// Parses the sectioned key = value grammar:
///
///   [problem]   family, maps, weights, extend, set, x0
///   [viscosity] f, gamma, A
///   [schedule]  alpha, beta, gamma_seq, delta, lambda, d
///   [stop]      eps, max_iter, force, index_policy, x_star
///
/// '#' starts a comment. All problems are collected and thrown together as
/// a ConfigError with line numbers. Only [problem] with family and maps is
/// required.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Resolved "key = value" lines, one per field, suitable for the CSV header
/// and for feeding back through parse_config.
std::string echo_config(const ExperimentConfig& cfg);

ProblemSpec build_problem(const ExperimentConfig& cfg);
ScheduleBundle build_bundle(const ExperimentConfig& cfg);
StopRule build_stop(const ExperimentConfig& cfg);
FamilyIndexPolicy build_policy(const ExperimentConfig& cfg);

/// Parses a set spec from the config grammar.
ConvexSet parse_set(const std::string& spec);

/// Parses a contraction spec, "linear:c" or "const:v1,...".
ContractionMap parse_contraction(const std::string& spec);

}  // namespace cofix
