#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cofix {

/// Scalar parameter sequence indexed from n = 0, with values confined to
/// [0, 1]. Three shapes cover every run in this project:
///   constant c, power a / (n + 1)^p, and an explicit table whose last
///   entry repeats forever.
class ScalarSchedule {
public:
  enum class Kind { Constant, Power, Table };

  /// Constant zero; factories below cover everything meaningful.
  ScalarSchedule() = default;

  static ScalarSchedule constant(double c);
  static ScalarSchedule power(double a, double p);
  static ScalarSchedule table(std::vector<double> values);

  /// Value at index n >= 0. A value outside [0, 1] throws std::domain_error
  /// naming the schedule.
  double value(int n) const;

  Kind kind() const { return kind_; }
  double amplitude() const { return a_; }
  double exponent() const { return p_; }
  const std::vector<double>& values() const { return table_; }
  std::string describe() const;

private:
  Kind kind_ = Kind::Constant;
  double a_ = 0.0;  // constant value or power amplitude
  double p_ = 0.0;  // power exponent
  std::vector<double> table_;
};

/// Weight rows lambda_{n, i} for the forward cascade, n >= 1, 1 <= i <= size.
class LambdaSchedule {
public:
  /// Empty schedule (size 0), the resting state for runs without a forward
  /// cascade.
  LambdaSchedule() = default;

  /// Step-independent row.
  static LambdaSchedule constant(std::vector<double> row);
  static LambdaSchedule from_rule(std::function<double(int, int)> rule, int size);

  double value(int n, int i) const;
  int size() const { return size_; }
  bool is_constant() const { return constant_; }
  const std::vector<double>& row() const { return row_; }
  std::string describe() const;

private:
  std::function<double(int, int)> rule_;
  std::vector<double> row_;
  int size_ = 0;
  bool constant_ = false;
};

/// Full parameter set for one solver run: the relaxation sequences
/// alpha, beta, gamma (the z-stage weight), delta, the cascade weight rows
/// lambda, and the margin d for the coupling condition below.
struct ScheduleBundle {
  ScalarSchedule alpha;
  ScalarSchedule beta;
  ScalarSchedule gamma_seq;
  ScalarSchedule delta;
  LambdaSchedule lambda;
  double d = 0.3;
};

/// Parameters used at reproduction defaults: alpha_n = 1/(n+1), beta = 0.1,
/// gamma = 0.5, delta = 0.5, lambda row (1/2, 1/3, ..., 1/(n_maps+1)), d = 0.3.
ScheduleBundle default_bundle(int n_maps = 3);

struct BundleValues {
  double alpha, beta, gamma, delta;
  std::vector<double> lambda_row;
};

/// All schedule values at index n, range-checked.
BundleValues eval_bundle(const ScheduleBundle& bundle, int n);

enum class ConditionStatus { PassAnalytic, PassNumeric, Fail, Unknown };

struct ConditionResult {
  std::string id;          // "C1".."C6"
  ConditionStatus status = ConditionStatus::Unknown;
  long witness = -1;       // first violating index for failures, else -1
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  int horizon = 0;
  bool all_pass() const;
  const ConditionResult& at(const std::string& id) const;
  std::string summary() const;
};

/// Checks the convergence-driving conditions:
///   C1  alpha_n -> 0 and sum alpha_n = infinity
///   C2  0 < liminf delta_n <= limsup delta_n < 1
///   C3  sum |gamma_{n+1} - gamma_n| < infinity (and lambda rows when present)
///   C4  sum |alpha_{n+1} - alpha_n| < infinity
///   C5  sum |beta_{n+1} - beta_n| < infinity
///   C6  (1 + beta_n) gamma_n - 2 beta_n > d with d in (0, 1)
///
/// Constant and power schedules are decided analytically. Table-backed
/// schedules are checked over the horizon only and at best earn pass-numeric
/// with a caveat, since a finite table says nothing about its tail.
/// Failures carry the first violating index, which does not change when the
/// horizon grows. Requires horizon >= 100.
ConditionReport validate_conditions(const ScheduleBundle& bundle, int horizon);

struct XuDecayResult {
  bool decayed = false;     // a_n fell below the threshold within the horizon
  long first_index = -1;    // first n with a_n <= threshold
  std::vector<double> trace;
};

/// Follows a_{n+1} = (1 - gamma_n) a_n + delta_n, the scalar recursion whose
/// decay to zero underpins the convergence proofs, and reports when it first
/// drops to the threshold. gamma values must lie in (0, 1]; the delta list
/// repeats its last entry.
XuDecayResult check_xu_decay(const ScalarSchedule& gamma_seq, const std::vector<double>& deltas,
                             double a0, int horizon, double threshold = 1e-8);

}  // namespace cofix
