#include "cofix/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cofix {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void put_coords(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << fmt(v[i]);
}

}  // namespace

void write_trace_csv(std::ostream& os, const IterationTrace& trace,
                     const std::vector<std::string>& extra_header,
                     const std::optional<Vector>& x_star) {
  double star_norm = 0.0;
  if (x_star) {
    require_point(*x_star, "trace reference point");
    star_norm = x_star->norm();
    if (star_norm == 0.0)
      throw std::invalid_argument("trace reference point must be nonzero");
    if (!trace.rows.empty() && trace.rows.front().x.size() != x_star->size())
      throw std::invalid_argument("trace reference point dimension mismatch");
  }

  {
    std::istringstream lines(trace.header);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
  }
  for (const auto& line : extra_header) os << "# " << line << '\n';

  const Eigen::Index dim = trace.rows.empty() ? 0 : trace.rows.front().x.size();
  os << "# columns: n";
  for (const char* stage : {"x", "z", "y"})
    for (Eigen::Index i = 1; i <= dim; ++i) os << ',' << stage << '_' << i;
  os << ",step_norm,r,delta\n";

  for (const auto& row : trace.rows) {
    os << row.n;
    put_coords(os, row.x);
    put_coords(os, row.z);
    put_coords(os, row.y);
    os << ',' << fmt(row.step_norm);
    os << ',' << fmt(row.step_norm == 0.0 ? -std::numeric_limits<double>::infinity()
                                          : std::log10(row.step_norm));
    if (x_star) {
      const double err = (row.x - *x_star).norm();
      os << ','
         << fmt(err == 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::log10(err / star_norm));
    } else {
      os << ",nan";
    }
    os << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const IterationTrace& trace,
                          const std::vector<std::string>& extra_header,
                          const std::optional<Vector>& x_star) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file '" + path + "' for writing");
  write_trace_csv(out, trace, extra_header, x_star);
  if (!out) throw std::runtime_error("failed while writing trace file '" + path + "'");
}

std::vector<std::string> csv_data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace cofix
