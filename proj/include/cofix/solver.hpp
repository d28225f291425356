#pragma once

#include "cofix/families.hpp"
#include "cofix/hilbert.hpp"
#include "cofix/schedules.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace cofix {

struct StopRule {
  double eps_step = 1e-7;  // stop once ||x_{n+1} - x_n|| < eps_step
  long max_iter = 100000;
};

void validate(const StopRule& stop);

/// Which family index feeds step n of a solver run.
///
/// growing() follows the step index, but caps the cascade depth of a W
/// family at the level where the running product of the weights falls below
/// 1e-18: beyond that level the cascade output is identical in double
/// precision, so the cap only removes provably invisible work. exact()
/// removes the cap; frozen(n) pins the index outright.
struct FamilyIndexPolicy {
  enum class Mode { Growing, ExactGrowing, Frozen };
  Mode mode = Mode::Growing;
  int frozen_index = 1;

  static FamilyIndexPolicy growing() { return {}; }
  static FamilyIndexPolicy exact() { return {Mode::ExactGrowing, 1}; }
  static FamilyIndexPolicy frozen(int n);
  std::string describe() const;
};

/// One common-fixed-point problem instance: the family, the constraint set,
/// the viscosity data (contraction f, its scale gamma, strongly positive A)
/// and the start point.
struct ProblemSpec {
  std::variant<WFamily, KFamily> family =
      WFamily({NonexpansiveMap::identity()}, {0.5}, Extension::IdentityPad);
  ConvexSet set = ConvexSet::whole_space();
  ContractionMap f = ContractionMap::linear(0.5);
  double gamma = 1.0;
  StrongPositiveOp a = StrongPositiveOp::scaled_identity(1, 1.0);
  Vector x0 = make_point({3.0});

  const WFamily& w_family() const;
  const KFamily& k_family() const;
  bool is_w() const { return std::holds_alternative<WFamily>(family); }
};

/// Checks dimensions and the viscosity compatibility gamma < gamma_bar / alpha.
/// Returns warnings (currently: start point outside the set, which solvers
/// repair by projection).
std::vector<std::string> validate(const ProblemSpec& spec);

struct TraceRow {
  long n = 0;
  Vector x, z, y;
  double step_norm = 0.0;
};

struct IterationTrace {
  std::string header;  // full configuration echo, one "key = value" per line
  std::vector<TraceRow> rows;
};

enum class StopReason { StepConverged, MaxIter };

struct SolveResult {
  Vector q;
  long iterations = 0;
  StopReason reason = StopReason::MaxIter;
  IterationTrace trace;
  std::vector<std::string> warnings;
};

/// Composite viscosity iteration driven by the cascaded W maps:
///
///   z_n = gamma_n x_n + (1 - gamma_n) W_n x_n
///   y_n = beta_n x_n + (1 - beta_n) W_n z_n
///   x_{n+1} = P_C[ alpha_n gamma f(x_n) + delta_n x_n
///                  + ((1 - delta_n) I - alpha_n A) y_n ]
///
/// The bundle must pass validate_conditions unless force is set; a forced
/// run records the failed report in the trace header.
SolveResult solve_w(const ProblemSpec& spec, const ScheduleBundle& bundle, const StopRule& stop,
                    FamilyIndexPolicy policy = FamilyIndexPolicy::growing(), bool force = false);

/// Same outer iteration with K_n in place of W_n.
SolveResult solve_k(const ProblemSpec& spec, const ScheduleBundle& bundle, const StopRule& stop,
                    FamilyIndexPolicy policy = FamilyIndexPolicy::growing(), bool force = false);

/// Two-stage special case: y_n = beta_n x_n + (1 - beta_n) K_n x_n and
/// x_{n+1} = P_C[ alpha_n gamma f(x_n) + (I - alpha_n A) y_n ]. Identical
/// arithmetic to solve_k with gamma_seq = 1 and delta = 0, which is how it is
/// computed; the z column of the trace therefore repeats x_n.
SolveResult solve_singthong(const ProblemSpec& spec, const ScheduleBundle& bundle,
                            const StopRule& stop,
                            FamilyIndexPolicy policy = FamilyIndexPolicy::growing(),
                            bool force = true);

/// Halpern-type baseline for a single map T and anchor u:
///   y_n = beta_n x_n + (1 - beta_n) T x_n,  x_{n+1} = alpha_n u + (1 - alpha_n) y_n.
SolveResult solve_kim_xu(const NonexpansiveMap& t, const Vector& u, const ScalarSchedule& alpha,
                         const ScalarSchedule& beta, const Vector& x0, const StopRule& stop);

/// Unprojected three-stage baseline for a single map T. Runs the composite
/// iteration on the whole space and aborts with std::runtime_error when the
/// iterates pass ||x|| > 1e12, which a valid problem cannot reach.
SolveResult solve_cho_qin(const ProblemSpec& spec, const ScheduleBundle& bundle,
                          const StopRule& stop, bool force = false);

/// Fixed point x_t of x -> t gamma f(x) + (I - t A) W x, found by plain
/// iteration of this contraction (factor at most 1 - t (gamma_bar - gamma
/// alpha)). Requires 0 < t < min(1 / ||A||, 1).
Vector viscosity_path(const std::function<Vector(const Vector&)>& w, const ContractionMap& f,
                      double gamma, const StrongPositiveOp& a, double t, const StopRule& stop);
Vector viscosity_path(const NonexpansiveMap& w, const ContractionMap& f, double gamma,
                      const StrongPositiveOp& a, double t, const StopRule& stop);

/// max over the samples p of <gamma f(q) - A q, p - q>. Nonpositive when q
/// solves the variational inequality over the sampled set.
double vi_residual(const Vector& q, const ContractionMap& f, double gamma,
                   const StrongPositiveOp& a, const std::vector<Vector>& fixed_point_samples);

}  // namespace cofix
