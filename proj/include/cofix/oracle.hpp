#pragma once

#include "cofix/hilbert.hpp"
#include "cofix/solver.hpp"

#include <functional>

namespace cofix {

/// Root of g(x) = map(x) - x on [lo, hi] by bisection, independent of the
/// solver stack. Requires a sign change of g over the bracket (an exact zero
/// at an endpoint counts); otherwise throws std::domain_error quoting both
/// endpoint values. The result is within tol of a true fixed point.
double bisection_fixed_point(const std::function<double(double)>& map, double lo, double hi,
                             double tol);

struct PicardResult {
  Vector value;
  long iterations = 0;
  bool converged = false;
};

/// Damped fixed-point iteration x <- (1 - damping) x + damping map(x).
/// Works in any dimension and serves as the second, independent oracle.
PicardResult damped_picard(const std::function<Vector(const Vector&)>& map, const Vector& x0,
                           double damping, const StopRule& stop);
PicardResult damped_picard(const NonexpansiveMap& map, const Vector& x0, double damping,
                           const StopRule& stop);

}  // namespace cofix
