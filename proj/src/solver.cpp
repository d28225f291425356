#include "cofix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cofix {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vector(const Eigen::Ref<const Vector>& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << fmt(v[i]);
  }
  return os.str();
}

constexpr int kValidationHorizon = 1000;
constexpr double kDepthCapTol = 1e-18;
constexpr int kDepthCapHard = 200000;
constexpr double kGuardThreshold = 1e12;

// Smallest cascade depth whose weight product is already below double
// resolution; evaluating deeper cannot change the output.
int w_depth_cap(const WFamily& fam) {
  if (fam.extension() == Extension::IdentityPad) return fam.listed_size();
  double prod = 1.0;
  for (int i = 1; i <= kDepthCapHard; ++i) {
    prod *= fam.weight_at(i);
    if (prod <= kDepthCapTol) return i;
  }
  return kDepthCapHard;
}

std::string failed_ids(const ConditionReport& report, const std::vector<std::string>& exempt) {
  std::string out;
  for (const auto& c : report.conditions) {
    if (c.status == ConditionStatus::PassAnalytic || c.status == ConditionStatus::PassNumeric)
      continue;
    if (std::find(exempt.begin(), exempt.end(), c.id) != exempt.end()) continue;
    if (!out.empty()) out += ", ";
    out += c.id;
  }
  return out;
}

std::string make_header(const std::string& method, const ProblemSpec& spec,
                        const ScheduleBundle& bundle, const StopRule& stop,
                        const FamilyIndexPolicy& policy, bool force,
                        const std::vector<std::string>& warnings) {
  std::ostringstream os;
  os << "method = " << method << '\n'
     << "family = " << (spec.is_w() ? spec.w_family().describe() : spec.k_family().describe())
     << '\n'
     << "set = " << spec.set.describe() << '\n'
     << "f = " << spec.f.label() << " alpha=" << fmt(spec.f.alpha()) << '\n'
     << "gamma = " << fmt(spec.gamma) << '\n'
     << "A = " << spec.a.describe() << " gamma_bar=" << fmt(spec.a.gamma_bar()) << " norm="
     << fmt(spec.a.op_norm()) << '\n'
     << "x0 = " << fmt_vector(spec.x0) << '\n'
     << "alpha = " << bundle.alpha.describe() << '\n'
     << "beta = " << bundle.beta.describe() << '\n'
     << "gamma_seq = " << bundle.gamma_seq.describe() << '\n'
     << "delta = " << bundle.delta.describe() << '\n'
     << "lambda = " << bundle.lambda.describe() << '\n'
     << "d = " << fmt(bundle.d) << '\n'
     << "eps_step = " << fmt(stop.eps_step) << '\n'
     << "max_iter = " << stop.max_iter << '\n'
     << "index_policy = " << policy.describe() << '\n'
     << "force = " << (force ? "true" : "false") << '\n';
  for (const auto& w : warnings) os << "warning = " << w << '\n';
  return os.str();
}

struct CoreOptions {
  bool project = true;
  bool guard = false;
  std::vector<std::string> exempt;  // condition ids not enforced for this variant
};

SolveResult run_composite(const std::string& method, const ProblemSpec& spec,
                          const ScheduleBundle& bundle, const StopRule& stop,
                          const FamilyIndexPolicy& policy, bool force, const CoreOptions& opt) {
  validate(stop);
  std::vector<std::string> warnings = validate(spec);

  const ConditionReport report = validate_conditions(bundle, kValidationHorizon);
  const std::string failed = failed_ids(report, opt.exempt);
  if (!failed.empty()) {
    if (!force)
      throw std::invalid_argument(method + ": schedule conditions failed (" + failed +
                                  "); rerun with force to override");
    warnings.push_back("forced past failed conditions: " + failed);
  }

  // Step n evaluates the family at index max(n, 1), subject to the policy.
  std::function<Vector(long, const Vector&)> family_eval;
  if (spec.is_w()) {
    const WFamily& fam = spec.w_family();
    const int cap = policy.mode == FamilyIndexPolicy::Mode::Growing
                        ? w_depth_cap(fam)
                        : std::numeric_limits<int>::max();
    family_eval = [&fam, policy, cap](long n, const Vector& p) {
      int idx = policy.mode == FamilyIndexPolicy::Mode::Frozen
                    ? policy.frozen_index
                    : static_cast<int>(std::min<long>(std::max(n, 1L), cap));
      return apply_w(fam, idx, p);
    };
  } else {
    const KFamily& fam = spec.k_family();
    family_eval = [&fam, policy](long n, const Vector& p) {
      const int idx = policy.mode == FamilyIndexPolicy::Mode::Frozen
                          ? policy.frozen_index
                          : static_cast<int>(std::max(n, 1L));
      return apply_k(fam, idx, p);
    };
  }

  SolveResult out;
  out.trace.header = make_header(method, spec, bundle, stop, policy, force, warnings);
  out.warnings = warnings;
  out.trace.rows.reserve(static_cast<std::size_t>(std::min<long>(stop.max_iter, 1 << 20)));

  Vector x = project(spec.set, spec.x0);
  for (long n = 0; n < stop.max_iter; ++n) {
    const BundleValues bv = eval_bundle(bundle, static_cast<int>(n));
    const Vector fx = family_eval(n, x);
    const Vector z = bv.gamma * x + (1.0 - bv.gamma) * fx;
    const Vector fz = family_eval(n, z);
    const Vector y = bv.beta * x + (1.0 - bv.beta) * fz;
    Vector v = (bv.alpha * spec.gamma) * spec.f(x) + bv.delta * x + (1.0 - bv.delta) * y -
               bv.alpha * spec.a.apply(y);
    Vector xn = opt.project ? project(spec.set, v) : std::move(v);
    const double step = (xn - x).norm();
    out.trace.rows.push_back({n, x, z, y, step});
    if (opt.guard && xn.norm() > kGuardThreshold)
      throw std::runtime_error(method + ": iterate norm exceeded " + fmt(kGuardThreshold) +
                               " at n = " + std::to_string(n));
    x = std::move(xn);
    if (step < stop.eps_step) {
      out.q = x;
      out.iterations = n + 1;
      out.reason = StopReason::StepConverged;
      return out;
    }
  }
  out.q = x;
  out.iterations = stop.max_iter;
  out.reason = StopReason::MaxIter;
  return out;
}

}  // namespace

void validate(const StopRule& stop) {
  if (!(stop.eps_step > 0.0) || !std::isfinite(stop.eps_step))
    throw std::invalid_argument("StopRule: eps_step must be positive and finite");
  if (stop.max_iter < 1) throw std::invalid_argument("StopRule: max_iter must be >= 1");
  if (stop.max_iter > std::numeric_limits<int>::max())
    throw std::invalid_argument("StopRule: max_iter too large");
}

FamilyIndexPolicy FamilyIndexPolicy::frozen(int n) {
  if (n < 1) throw std::invalid_argument("FamilyIndexPolicy: frozen index must be >= 1");
  return {Mode::Frozen, n};
}

std::string FamilyIndexPolicy::describe() const {
  switch (mode) {
    case Mode::Growing: return "growing";
    case Mode::ExactGrowing: return "exact";
    case Mode::Frozen: return "frozen:" + std::to_string(frozen_index);
  }
  return "?";
}

const WFamily& ProblemSpec::w_family() const {
  if (!is_w()) throw std::logic_error("ProblemSpec holds a K family");
  return std::get<WFamily>(family);
}

const KFamily& ProblemSpec::k_family() const {
  if (is_w()) throw std::logic_error("ProblemSpec holds a W family");
  return std::get<KFamily>(family);
}

std::vector<std::string> validate(const ProblemSpec& spec) {
  require_point(spec.x0, "start point");
  const int set_dim = spec.set.dimension();
  if (set_dim >= 0 && set_dim != spec.x0.size())
    throw std::invalid_argument("ProblemSpec: constraint set dimension " +
                                std::to_string(set_dim) + " does not match the start point");
  if (spec.a.dimension() != spec.x0.size())
    throw std::invalid_argument("ProblemSpec: operator dimension does not match the start point");
  const Vector fx = spec.f(spec.x0);
  if (fx.size() != spec.x0.size())
    throw std::invalid_argument("ProblemSpec: contraction must preserve dimension");
  const double limit = spec.a.gamma_bar() / spec.f.alpha();
  if (!(spec.gamma > 0.0) || !(spec.gamma < limit))
    throw std::invalid_argument("ProblemSpec: gamma = " + fmt(spec.gamma) +
                                " must lie in (0, gamma_bar / alpha = " + fmt(limit) + ")");
  std::vector<std::string> warnings;
  if (!spec.set.contains(spec.x0))
    warnings.push_back("start point lies outside the constraint set, projected in");
  return warnings;
}

SolveResult solve_w(const ProblemSpec& spec, const ScheduleBundle& bundle, const StopRule& stop,
                    FamilyIndexPolicy policy, bool force) {
  if (!spec.is_w()) throw std::invalid_argument("solve_w: spec must hold a W family");
  return run_composite("solve_w", spec, bundle, stop, policy, force, CoreOptions{});
}

SolveResult solve_k(const ProblemSpec& spec, const ScheduleBundle& bundle, const StopRule& stop,
                    FamilyIndexPolicy policy, bool force) {
  if (spec.is_w()) throw std::invalid_argument("solve_k: spec must hold a K family");
  return run_composite("solve_k", spec, bundle, stop, policy, force, CoreOptions{});
}

SolveResult solve_singthong(const ProblemSpec& spec, const ScheduleBundle& bundle,
                            const StopRule& stop, FamilyIndexPolicy policy, bool force) {
  if (spec.is_w()) throw std::invalid_argument("solve_singthong: spec must hold a K family");
  // Two-stage variant: no z averaging, no delta anchoring. Realized by pinning
  // those schedules, which keeps the arithmetic identical to solve_k runs with
  // the same pinned values. C2 and C6 do not apply to this variant.
  ScheduleBundle pinned = bundle;
  pinned.gamma_seq = ScalarSchedule::constant(1.0);
  pinned.delta = ScalarSchedule::constant(0.0);
  CoreOptions opt;
  opt.exempt = {"C2", "C6"};
  return run_composite("solve_singthong", spec, pinned, stop, policy, force, opt);
}

SolveResult solve_cho_qin(const ProblemSpec& spec, const ScheduleBundle& bundle,
                          const StopRule& stop, bool force) {
  if (spec.is_w()) throw std::invalid_argument("solve_cho_qin: spec must hold a K family");
  if (spec.k_family().size() != 1)
    throw std::invalid_argument("solve_cho_qin: expects a single-map family");
  if (!spec.set.is_whole_space())
    throw std::invalid_argument("solve_cho_qin: runs unprojected, set must be the whole space");
  CoreOptions opt;
  opt.project = false;
  opt.guard = true;
  return run_composite("solve_cho_qin", spec, bundle, stop, FamilyIndexPolicy::growing(), force,
                       opt);
}

SolveResult solve_kim_xu(const NonexpansiveMap& t, const Vector& u, const ScalarSchedule& alpha,
                         const ScalarSchedule& beta, const Vector& x0, const StopRule& stop) {
  validate(stop);
  require_point(u, "anchor");
  require_point(x0, "start point");
  if (u.size() != x0.size()) throw std::invalid_argument("solve_kim_xu: dimension mismatch");

  SolveResult out;
  {
    std::ostringstream os;
    os << "method = solve_kim_xu\n"
       << "map = " << t.label() << '\n'
       << "anchor = " << fmt_vector(u) << '\n'
       << "x0 = " << fmt_vector(x0) << '\n'
       << "alpha = " << alpha.describe() << '\n'
       << "beta = " << beta.describe() << '\n'
       << "eps_step = " << fmt(stop.eps_step) << '\n'
       << "max_iter = " << stop.max_iter << '\n'
       << "note = z column repeats x, this variant has no z stage\n";
    out.trace.header = os.str();
  }
  out.trace.rows.reserve(static_cast<std::size_t>(std::min<long>(stop.max_iter, 1 << 20)));

  Vector x = x0;
  for (long n = 0; n < stop.max_iter; ++n) {
    const double an = alpha.value(static_cast<int>(n));
    const double bn = beta.value(static_cast<int>(n));
    const Vector y = bn * x + (1.0 - bn) * t(x);
    Vector xn = an * u + (1.0 - an) * y;
    const double step = (xn - x).norm();
    out.trace.rows.push_back({n, x, x, y, step});
    x = std::move(xn);
    if (step < stop.eps_step) {
      out.q = x;
      out.iterations = n + 1;
      out.reason = StopReason::StepConverged;
      return out;
    }
  }
  out.q = x;
  out.iterations = stop.max_iter;
  out.reason = StopReason::MaxIter;
  return out;
}

Vector viscosity_path(const std::function<Vector(const Vector&)>& w, const ContractionMap& f,
                      double gamma, const StrongPositiveOp& a, double t, const StopRule& stop) {
  validate(stop);
  const double t_max = std::min(1.0 / a.op_norm(), 1.0);
  if (!(t > 0.0) || !(t < t_max))
    throw std::invalid_argument("viscosity_path: need 0 < t < " + fmt(t_max));
  const double limit = a.gamma_bar() / f.alpha();
  if (!(gamma > 0.0) || !(gamma < limit))
    throw std::invalid_argument("viscosity_path: gamma must lie in (0, " + fmt(limit) + ")");

  Vector x = Vector::Zero(a.dimension());
  for (long n = 0; n < stop.max_iter; ++n) {
    const Vector wx = w(x);
    Vector xn = (t * gamma) * f(x) + wx - t * a.apply(wx);
    if ((xn - x).norm() < stop.eps_step) return xn;
    x = std::move(xn);
  }
  return x;
}

Vector viscosity_path(const NonexpansiveMap& w, const ContractionMap& f, double gamma,
                      const StrongPositiveOp& a, double t, const StopRule& stop) {
  return viscosity_path([&w](const Vector& x) { return w(x); }, f, gamma, a, t, stop);
}

double vi_residual(const Vector& q, const ContractionMap& f, double gamma,
                   const StrongPositiveOp& a, const std::vector<Vector>& fixed_point_samples) {
  require_point(q, "vi_residual point");
  if (fixed_point_samples.empty())
    throw std::invalid_argument("vi_residual: need at least one sample");
  const Vector drive = gamma * f(q) - a.apply(q);
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& p : fixed_point_samples) {
    if (p.size() != q.size()) throw std::invalid_argument("vi_residual: sample dimension mismatch");
    worst = std::max(worst, drive.dot(p - q));
  }
  return worst;
}

}  // namespace cofix
