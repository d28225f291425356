#include "cofix/schedules.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cofix {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fixed burn-in for window checks so failure witnesses do not move when the
// horizon grows.
constexpr int kBurnIn = 50;
constexpr int kMinHorizon = 100;
constexpr double kMargin = 1e-6;

const char* kTailCaveat = "table tail unverifiable, checked over the horizon only";

}  // namespace

ScalarSchedule ScalarSchedule::constant(double c) {
  if (!(c >= 0.0) || !(c <= 1.0))
    throw std::invalid_argument("schedule const:" + fmt(c) + ": value outside [0, 1]");
  ScalarSchedule s;
  s.kind_ = Kind::Constant;
  s.a_ = c;
  return s;
}

ScalarSchedule ScalarSchedule::power(double a, double p) {
  if (!(a >= 0.0) || !(a <= 1.0))
    throw std::invalid_argument("schedule power: amplitude " + fmt(a) + " outside [0, 1]");
  if (!std::isfinite(p)) throw std::invalid_argument("schedule power: exponent must be finite");
  ScalarSchedule s;
  s.kind_ = Kind::Power;
  s.a_ = a;
  s.p_ = p;
  return s;
}

ScalarSchedule ScalarSchedule::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("schedule table: need at least one value");
  for (double v : values)
    if (!(v >= 0.0) || !(v <= 1.0))
      throw std::invalid_argument("schedule table: value " + fmt(v) + " outside [0, 1]");
  ScalarSchedule s;
  s.kind_ = Kind::Table;
  s.table_ = std::move(values);
  return s;
}

double ScalarSchedule::value(int n) const {
  if (n < 0) throw std::invalid_argument("schedule index must be >= 0");
  double v = 0.0;
  switch (kind_) {
    case Kind::Constant: v = a_; break;
    case Kind::Power: v = a_ / std::pow(n + 1.0, p_); break;
    case Kind::Table: {
      const auto idx = std::min(static_cast<std::size_t>(n), table_.size() - 1);
      v = table_[idx];
      break;
    }
  }
  if (!(v >= 0.0) || !(v <= 1.0))
    throw std::domain_error("schedule " + describe() + ": value " + fmt(v) + " at n = " +
                            std::to_string(n) + " outside [0, 1]");
  return v;
}

std::string ScalarSchedule::describe() const {
  switch (kind_) {
    case Kind::Constant: return "const:" + fmt(a_);
    case Kind::Power: return "power:" + fmt(a_) + "," + fmt(p_);
    case Kind::Table: {
      std::ostringstream os;
      os << "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) os << ',';
        os << fmt(table_[i]);
      }
      return os.str();
    }
  }
  return "?";
}

LambdaSchedule LambdaSchedule::constant(std::vector<double> row) {
  if (row.empty()) throw std::invalid_argument("lambda schedule: need at least one weight");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool last = (i + 1 == row.size());
    const bool ok = last ? (row[i] > 0.0 && row[i] <= 1.0) : (row[i] > 0.0 && row[i] < 1.0);
    if (!ok)
      throw std::invalid_argument("lambda schedule: weight " + fmt(row[i]) + " at position " +
                                  std::to_string(i + 1) + " out of range");
  }
  LambdaSchedule s;
  s.row_ = std::move(row);
  s.size_ = static_cast<int>(s.row_.size());
  s.constant_ = true;
  s.rule_ = [values = s.row_](int, int i) { return values[i - 1]; };
  return s;
}

LambdaSchedule LambdaSchedule::from_rule(std::function<double(int, int)> rule, int size) {
  if (!rule) throw std::invalid_argument("lambda schedule: empty rule");
  if (size < 1) throw std::invalid_argument("lambda schedule: size must be >= 1");
  LambdaSchedule s;
  s.rule_ = std::move(rule);
  s.size_ = size;
  s.constant_ = false;
  return s;
}

double LambdaSchedule::value(int n, int i) const {
  if (size_ == 0) throw std::logic_error("lambda schedule is empty");
  if (n < 1) throw std::invalid_argument("lambda schedule: step index must be >= 1");
  if (i < 1 || i > size_) throw std::invalid_argument("lambda schedule: position out of range");
  const double v = rule_(n, i);
  const bool last = (i == size_);
  const bool ok = last ? (v > 0.0 && v <= 1.0) : (v > 0.0 && v < 1.0);
  if (!ok)
    throw std::domain_error("lambda schedule: weight " + fmt(v) + " at (n = " +
                            std::to_string(n) + ", i = " + std::to_string(i) + ") out of range");
  return v;
}

std::string LambdaSchedule::describe() const {
  if (size_ == 0) return "none";
  if (!constant_) return "rule";
  std::ostringstream os;
  os << "const:";
  for (std::size_t i = 0; i < row_.size(); ++i) {
    if (i) os << ',';
    os << fmt(row_[i]);
  }
  return os.str();
}

ScheduleBundle default_bundle(int n_maps) {
  if (n_maps < 1) throw std::invalid_argument("default_bundle: need at least one map");
  std::vector<double> row(n_maps);
  for (int i = 0; i < n_maps; ++i) row[i] = 1.0 / (i + 2);
  ScheduleBundle b;
  b.alpha = ScalarSchedule::power(1.0, 1.0);
  b.beta = ScalarSchedule::constant(0.1);
  b.gamma_seq = ScalarSchedule::constant(0.5);
  b.delta = ScalarSchedule::constant(0.5);
  b.lambda = LambdaSchedule::constant(std::move(row));
  b.d = 0.3;
  return b;
}

BundleValues eval_bundle(const ScheduleBundle& bundle, int n) {
  if (n < 0) throw std::invalid_argument("eval_bundle: index must be >= 0");
  BundleValues v;
  v.alpha = bundle.alpha.value(n);
  v.beta = bundle.beta.value(n);
  v.gamma = bundle.gamma_seq.value(n);
  v.delta = bundle.delta.value(n);
  if (bundle.lambda.size() > 0) {
    v.lambda_row.resize(bundle.lambda.size());
    for (int i = 1; i <= bundle.lambda.size(); ++i)
      v.lambda_row[i - 1] = bundle.lambda.value(std::max(n, 1), i);
  }
  return v;
}

bool ConditionReport::all_pass() const {
  for (const auto& c : conditions)
    if (c.status != ConditionStatus::PassAnalytic && c.status != ConditionStatus::PassNumeric)
      return false;
  return !conditions.empty();
}

const ConditionResult& ConditionReport::at(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw std::invalid_argument("no condition named " + id);
}

std::string ConditionReport::summary() const {
  std::ostringstream os;
  for (const auto& c : conditions) {
    const char* tag = "?";
    switch (c.status) {
      case ConditionStatus::PassAnalytic: tag = "pass-analytic"; break;
      case ConditionStatus::PassNumeric: tag = "pass-numeric"; break;
      case ConditionStatus::Fail: tag = "fail"; break;
      case ConditionStatus::Unknown: tag = "unknown"; break;
    }
    os << c.id << " [" << tag << "]";
    if (c.status == ConditionStatus::Fail && c.witness >= 0)
      os << " witness n = " << c.witness;
    if (!c.note.empty()) os << " " << c.note;
    os << '\n';
  }
  return os.str();
}

namespace {

ConditionResult check_c1(const ScalarSchedule& alpha) {
  ConditionResult r{"C1", ConditionStatus::Unknown, -1, ""};
  switch (alpha.kind()) {
    case ScalarSchedule::Kind::Constant:
      r.status = ConditionStatus::Fail;
      r.witness = 0;
      r.note = alpha.amplitude() == 0.0 ? "alpha is identically zero, its series is finite"
                                        : "alpha does not decay to zero";
      break;
    case ScalarSchedule::Kind::Power: {
      const double a = alpha.amplitude();
      const double p = alpha.exponent();
      if (a == 0.0) {
        r.status = ConditionStatus::Fail;
        r.witness = 0;
        r.note = "alpha is identically zero, its series is finite";
      } else if (p > 0.0 && p <= 1.0) {
        r.status = ConditionStatus::PassAnalytic;
        r.note = "decays to zero, series diverges (p <= 1)";
      } else if (p > 1.0) {
        r.status = ConditionStatus::Fail;
        r.note = "series converges (p > 1)";
      } else {
        r.status = ConditionStatus::Fail;
        r.note = "alpha does not decay to zero (p <= 0)";
      }
      break;
    }
    case ScalarSchedule::Kind::Table:
      r.status = ConditionStatus::PassNumeric;
      r.note = kTailCaveat;
      break;
  }
  return r;
}

ConditionResult check_c2(const ScalarSchedule& delta, int horizon) {
  ConditionResult r{"C2", ConditionStatus::Unknown, -1, ""};
  switch (delta.kind()) {
    case ScalarSchedule::Kind::Constant: {
      const double c = delta.amplitude();
      if (c > 0.0 && c < 1.0) {
        r.status = ConditionStatus::PassAnalytic;
        r.note = "constant strictly inside (0, 1)";
      } else {
        r.status = ConditionStatus::Fail;
        r.witness = 0;
        r.note = "constant " + fmt(c) + " not strictly inside (0, 1)";
      }
      break;
    }
    case ScalarSchedule::Kind::Power: {
      if (delta.exponent() == 0.0)
        return check_c2(ScalarSchedule::constant(delta.amplitude()), horizon);
      r.status = ConditionStatus::Fail;
      r.note = delta.exponent() > 0.0 ? "liminf is zero" : "not confined to (0, 1)";
      break;
    }
    case ScalarSchedule::Kind::Table: {
      for (int n = kBurnIn; n < horizon; ++n) {
        const double v = delta.value(n);
        if (v < kMargin || v > 1.0 - kMargin) {
          r.status = ConditionStatus::Fail;
          r.witness = n;
          r.note = "value " + fmt(v) + " leaves the margin band [" + fmt(kMargin) + ", " +
                   fmt(1.0 - kMargin) + "]";
          return r;
        }
      }
      r.status = ConditionStatus::PassNumeric;
      r.note = kTailCaveat;
      break;
    }
  }
  return r;
}

// Summability of successive increments, shared by C3, C4, C5.
ConditionResult check_increments(const char* id, const char* name, const ScalarSchedule& s) {
  ConditionResult r{id, ConditionStatus::Unknown, -1, ""};
  switch (s.kind()) {
    case ScalarSchedule::Kind::Constant:
      r.status = ConditionStatus::PassAnalytic;
      r.note = std::string(name) + " increments vanish";
      break;
    case ScalarSchedule::Kind::Power:
      if (s.exponent() >= 0.0 || s.amplitude() == 0.0) {
        r.status = ConditionStatus::PassAnalytic;
        r.note = s.exponent() == 0.0 || s.amplitude() == 0.0
                     ? std::string(name) + " increments vanish"
                     : std::string(name) + " is monotone, increments telescope to " +
                           fmt(s.amplitude());
      } else {
        r.status = ConditionStatus::Fail;
        r.note = std::string(name) + " grows without bound";
      }
      break;
    case ScalarSchedule::Kind::Table:
      r.status = ConditionStatus::PassNumeric;
      r.note = kTailCaveat;
      break;
  }
  return r;
}

ConditionResult check_c6(const ScheduleBundle& bundle, int horizon) {
  ConditionResult r{"C6", ConditionStatus::Unknown, -1, ""};
  if (!(bundle.d > 0.0) || !(bundle.d < 1.0)) {
    r.status = ConditionStatus::Fail;
    r.note = "margin d = " + fmt(bundle.d) + " outside (0, 1)";
    return r;
  }
  const bool analytic = bundle.beta.kind() == ScalarSchedule::Kind::Constant &&
                        bundle.gamma_seq.kind() == ScalarSchedule::Kind::Constant;
  const int upto = analytic ? 1 : horizon;
  for (int n = 0; n < upto; ++n) {
    const double b = bundle.beta.value(n);
    const double g = bundle.gamma_seq.value(n);
    const double v = (1.0 + b) * g - 2.0 * b;
    if (!(v > bundle.d)) {
      r.status = ConditionStatus::Fail;
      r.witness = n;
      r.note = "(1 + beta) gamma - 2 beta = " + fmt(v) + " <= d = " + fmt(bundle.d);
      return r;
    }
  }
  r.status = analytic ? ConditionStatus::PassAnalytic : ConditionStatus::PassNumeric;
  r.note = analytic ? "margin holds for the constant pair"
                    : "margin holds for every n below the horizon";
  return r;
}

}  // namespace

ConditionReport validate_conditions(const ScheduleBundle& bundle, int horizon) {
  if (horizon < kMinHorizon)
    throw std::invalid_argument("validate_conditions: horizon must be >= " +
                                std::to_string(kMinHorizon));
  ConditionReport report;
  report.horizon = horizon;
  report.conditions.push_back(check_c1(bundle.alpha));
  report.conditions.push_back(check_c2(bundle.delta, horizon));

  ConditionResult c3 = check_increments("C3", "gamma", bundle.gamma_seq);
  if (bundle.lambda.size() > 0) {
    if (bundle.lambda.is_constant()) {
      c3.note += "; lambda rows constant";
    } else {
      double rowsum = 0.0;
      for (int n = 1; n < horizon; ++n) {
        double inc = 0.0;
        for (int i = 1; i <= bundle.lambda.size(); ++i)
          inc = std::max(inc, std::abs(bundle.lambda.value(n + 1, i) - bundle.lambda.value(n, i)));
        rowsum += inc;
      }
      if (c3.status == ConditionStatus::PassAnalytic) c3.status = ConditionStatus::PassNumeric;
      c3.note += "; lambda row increments sum to " + fmt(rowsum) + " over the horizon";
    }
  }
  report.conditions.push_back(std::move(c3));

  report.conditions.push_back(check_increments("C4", "alpha", bundle.alpha));
  report.conditions.push_back(check_increments("C5", "beta", bundle.beta));
  report.conditions.push_back(check_c6(bundle, horizon));
  return report;
}

XuDecayResult check_xu_decay(const ScalarSchedule& gamma_seq, const std::vector<double>& deltas,
                             double a0, int horizon, double threshold) {
  if (deltas.empty()) throw std::invalid_argument("check_xu_decay: need at least one delta");
  for (double d : deltas)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::invalid_argument("check_xu_decay: deltas must be finite and nonnegative");
  if (!(a0 >= 0.0) || !std::isfinite(a0))
    throw std::invalid_argument("check_xu_decay: a0 must be finite and nonnegative");
  if (horizon < 1) throw std::invalid_argument("check_xu_decay: horizon must be >= 1");
  if (!(threshold > 0.0)) throw std::invalid_argument("check_xu_decay: threshold must be positive");

  XuDecayResult out;
  out.trace.reserve(horizon + 1);
  double a = a0;
  out.trace.push_back(a);
  if (a <= threshold) {
    out.decayed = true;
    out.first_index = 0;
    return out;
  }
  for (int n = 0; n < horizon; ++n) {
    const double g = gamma_seq.value(n);
    if (!(g > 0.0))
      throw std::domain_error("check_xu_decay: gamma value " + fmt(g) + " at n = " +
                              std::to_string(n) + " outside (0, 1]");
    const auto idx = std::min(static_cast<std::size_t>(n), deltas.size() - 1);
    a = (1.0 - g) * a + deltas[idx];
    out.trace.push_back(a);
    if (!out.decayed && a <= threshold) {
      out.decayed = true;
      out.first_index = n + 1;
    }
  }
  return out;
}

}  // namespace cofix
