#include "cofix/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cofix {

namespace {

const TraceRow& row_at(const IterationTrace& trace, long n) {
  if (n < 0 || static_cast<std::size_t>(n) >= trace.rows.size())
    throw std::invalid_argument("trace row " + std::to_string(n) + " out of range");
  const TraceRow& row = trace.rows[static_cast<std::size_t>(n)];
  if (row.n != n) throw std::logic_error("trace rows are not contiguous");
  return row;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double metric_r(const IterationTrace& trace, long n) {
  const double step = row_at(trace, n).step_norm;
  if (step == 0.0) return kNegInf;
  return std::log10(step);
}

double metric_delta(const IterationTrace& trace, long n, const Vector& x_star) {
  require_point(x_star, "metric_delta reference");
  const double scale = x_star.norm();
  if (scale == 0.0)
    throw std::invalid_argument("metric_delta: reference point must be nonzero");
  const TraceRow& row = row_at(trace, n);
  if (row.x.size() != x_star.size())
    throw std::invalid_argument("metric_delta: reference dimension mismatch");
  const double err = (row.x - x_star).norm();
  if (err == 0.0) return kNegInf;
  return std::log10(err / scale);
}

const std::vector<TableTarget>& reference_tables() {
  static const std::vector<TableTarget> rows = {
      {1, 'w', 0.75290, 25, {{"sin", 0.6837577884}, {"cos", 0.7297090424}}},
      {1, 'k', 0.71491, 19, {{"sin", 0.6555494556}, {"cos", 0.7551522437}}},
      {2, 'w', 0.0089628, 44834, {{"sin", 0.0089626800}, {"atan", 0.0089625600}}},
      {2, 'k', 0.0080118, 40066, {{"sin", 0.0080117142}, {"atan", 0.0080116285}}},
      {3, 'w', 0.59403, 85,
       {{"sin", 0.5597051868}, {"cos", 0.8286918026}, {"atan", 0.5360182305}}},
      {3, 'k', 0.67735, 18,
       {{"sin", 0.6267302508}, {"cos", 0.7792362880}, {"atan", 0.5953623347}}},
  };
  return rows;
}

const TableTarget& reference_row(int table_id, char method) {
  for (const auto& row : reference_tables())
    if (row.table_id == table_id && row.method == method) return row;
  throw std::invalid_argument("no reference row for table " + std::to_string(table_id) +
                              " method " + std::string(1, method));
}

TableComparison compare_to_table(const SolveResult& result, const TableTarget& target,
                                 double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compare_to_table: tol must be positive");
  if (result.q.size() != 1)
    throw std::invalid_argument("compare_to_table: reference rows are scalar instances");

  TableComparison cmp;
  cmp.table_id = target.table_id;
  cmp.method = target.method;
  cmp.ours = result.q[0];
  cmp.reference = target.x_star;
  cmp.abs_err = std::abs(cmp.ours - cmp.reference);
  cmp.within_tol = cmp.abs_err <= tol;
  cmp.our_iterations = result.iterations;
  cmp.ref_iterations = target.iterations;

  Vector probe = make_point({target.x_star});
  for (const auto& [label, printed] : target.map_images) {
    const double image = NonexpansiveMap::from_label(label)(probe)[0];
    cmp.image_errors.push_back(std::abs(image - printed));
    cmp.max_image_err = std::max(cmp.max_image_err, cmp.image_errors.back());
  }
  return cmp;
}

}  // namespace cofix
