#include "cofix/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cofix {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double bisection_fixed_point(const std::function<double(double)>& map, double lo, double hi,
                             double tol) {
  if (!map) throw std::invalid_argument("bisection_fixed_point: empty map");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("bisection_fixed_point: need a finite bracket lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bisection_fixed_point: tol must be positive");

  auto g = [&map](double x) { return map(x) - x; };
  double glo = g(lo);
  double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi))
    throw std::domain_error("bisection_fixed_point: residual not finite at a bracket endpoint");
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw std::domain_error("bisection_fixed_point: no sign change over [" + fmt(lo) + ", " +
                            fmt(hi) + "]: g(lo) = " + fmt(glo) + ", g(hi) = " + fmt(ghi));

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket at floating-point resolution
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PicardResult damped_picard(const std::function<Vector(const Vector&)>& map, const Vector& x0,
                           double damping, const StopRule& stop) {
  if (!map) throw std::invalid_argument("damped_picard: empty map");
  require_point(x0, "damped_picard start point");
  if (!(damping > 0.0) || !(damping <= 1.0))
    throw std::invalid_argument("damped_picard: damping must lie in (0, 1]");
  validate(stop);

  PicardResult out;
  Vector x = x0;
  for (long n = 0; n < stop.max_iter; ++n) {
    Vector xn = (1.0 - damping) * x + damping * map(x);
    const double step = (xn - x).norm();
    x = std::move(xn);
    if (step < stop.eps_step) {
      out.value = std::move(x);
      out.iterations = n + 1;
      out.converged = true;
      return out;
    }
  }
  out.value = std::move(x);
  out.iterations = stop.max_iter;
  out.converged = false;
  return out;
}

PicardResult damped_picard(const NonexpansiveMap& map, const Vector& x0, double damping,
                           const StopRule& stop) {
  return damped_picard([&map](const Vector& x) { return map(x); }, x0, damping, stop);
}

}  // namespace cofix
