#pragma once

#include "cofix/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cofix {

/// Writes a solve trace as CSV. The comment block echoes the trace header
/// plus any extra lines, then one data row per iteration:
///
///   n, x_1..x_d, z_1..z_d, y_1..y_d, step_norm, r, delta
///
/// r is log10 of the step norm and delta is log10 of the relative error
/// against x_star; both print the literal token -inf for an exact zero and
/// delta prints nan when no reference is given. Output depends only on the
/// trace and the arguments, so identical runs produce identical bytes.
void write_trace_csv(std::ostream& os, const IterationTrace& trace,
                     const std::vector<std::string>& extra_header,
                     const std::optional<Vector>& x_star);

void write_trace_csv_file(const std::string& path, const IterationTrace& trace,
                          const std::vector<std::string>& extra_header,
                          const std::optional<Vector>& x_star);

/// Data rows of a CSV payload: every line that is not blank and does not
/// start with '#'.
std::vector<std::string> csv_data_lines(const std::string& text);

}  // namespace cofix
