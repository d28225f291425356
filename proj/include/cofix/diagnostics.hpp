#pragma once

#include "cofix/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cofix {

/// log10 of the step norm at row n of a trace; -inf for an exact repeat.
double metric_r(const IterationTrace& trace, long n);

/// log10 of the relative error ||x_n - x_star|| / ||x_star||; -inf at an
/// exact hit. Throws when x_star is the zero vector.
double metric_delta(const IterationTrace& trace, long n, const Vector& x_star);

/// One row of the published simulation results for the standard scalar test
/// instances: the reported limit, iteration count, and the map images at
/// that limit.
struct TableTarget {
  int table_id = 0;  // 1: (sin, cos)  2: (sin, atan)  3: (sin, cos, atan)
  char method = '?'; // 'w' or 'k'
  double x_star = 0.0;
  long iterations = 0;
  std::vector<std::pair<std::string, double>> map_images;
};

const std::vector<TableTarget>& reference_tables();
const TableTarget& reference_row(int table_id, char method);

struct TableComparison {
  int table_id = 0;
  char method = '?';
  double ours = 0.0;
  double reference = 0.0;
  double abs_err = 0.0;
  bool within_tol = false;
  long our_iterations = 0;
  long ref_iterations = 0;
  std::vector<double> image_errors;  // recomputed map image at x_star vs printed
  double max_image_err = 0.0;
};

/// Compares a solver result against a published row: |q - x_star| against
/// tol, iteration counts side by side, and the printed map images against
/// fresh evaluations at the printed limit.
TableComparison compare_to_table(const SolveResult& result, const TableTarget& target,
                                 double tol);

}  // namespace cofix
