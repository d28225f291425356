#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cofix {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// True iff x has at least one coordinate and every entry is finite.
bool is_valid_point(const Eigen::Ref<const Vector>& x);

/// Throws std::invalid_argument naming `what` if x is not a valid point.
void require_point(const Eigen::Ref<const Vector>& x, const std::string& what);

Vector make_point(std::initializer_list<double> coords);

/// Euclidean inner product. Dimension mismatch throws.
double inner(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v);

/// Closed convex set with an exact metric projection.
///
/// Supported shapes: the whole space (projection is the identity), an
/// axis-aligned box [lo, hi], a closed ball B(center, radius), and a closed
/// halfspace {x : <normal, x> <= offset}.
class ConvexSet {
public:
  static ConvexSet whole_space();
  static ConvexSet box(Vector lo, Vector hi);
  /// 1-d box convenience.
  static ConvexSet interval(double lo, double hi);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector normal, double offset);

  bool is_whole_space() const;
  /// Ambient dimension, or -1 when the set imposes none (whole space).
  int dimension() const;
  bool contains(const Eigen::Ref<const Vector>& x, double tol = 1e-12) const;
  /// Short text form for config echo, e.g. "box:0,1" or "all".
  std::string describe() const;

  friend Vector project(const ConvexSet& set, const Eigen::Ref<const Vector>& x);

private:
  struct WholeSpace {};
  struct Box {
    Vector lo, hi;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  struct Halfspace {
    Vector normal;  // nonzero
    double offset;
  };
  using Rep = std::variant<WholeSpace, Box, Ball, Halfspace>;

  explicit ConvexSet(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Metric projection onto the set. Exact for every supported shape.
Vector project(const ConvexSet& set, const Eigen::Ref<const Vector>& x);

/// Distance from x to the set, ||x - project(set, x)||.
double set_residual(const ConvexSet& set, const Eigen::Ref<const Vector>& x);

/// Symmetric strongly positive linear operator together with its smallest
/// eigenvalue (the strong positivity coefficient) and operator norm.
class StrongPositiveOp {
public:
  /// Validates symmetry and positivity; both spectral bounds are computed
  /// once here via a symmetric eigendecomposition.
  static StrongPositiveOp from_matrix(Matrix m);
  static StrongPositiveOp scaled_identity(int dim, double c);

  Vector apply(const Eigen::Ref<const Vector>& x) const;
  const Matrix& matrix() const { return m_; }
  double gamma_bar() const { return gamma_bar_; }
  double op_norm() const { return op_norm_; }
  int dimension() const { return static_cast<int>(m_.rows()); }
  std::string describe() const;

private:
  StrongPositiveOp(Matrix m, double gb, double on, std::string desc)
      : m_(std::move(m)), gamma_bar_(gb), op_norm_(on), desc_(std::move(desc)) {}
  Matrix m_;
  double gamma_bar_;
  double op_norm_;
  std::string desc_;
};

/// Smallest eigenvalue of a symmetric matrix. Asymmetric input throws; a
/// non-positive result is returned as-is so callers can report it.
double strong_positivity_coefficient(const Matrix& m);

/// Bounds for ||I - rho * A|| with 0 < rho <= 1/||A||: returns the exact
/// spectral norm and the bound 1 - rho * gamma_bar, in that order.
std::pair<double, double> damped_operator_norm_bound(const StrongPositiveOp& a, double rho);

/// Contraction candidate: an evaluable rule plus its claimed modulus
/// alpha in (0, 1). The modulus is trusted here and checked by sampling in
/// the test suite; lying rules surface as diverging iterations downstream.
class ContractionMap {
public:
  ContractionMap(std::function<Vector(const Vector&)> rule, double alpha, std::string label);

  /// f(x) = c * x with |c| < 1; modulus |c| (1e-6 floor for c = 0).
  static ContractionMap linear(double c);
  /// f(x) = value; modulus is the 1e-6 placeholder.
  static ContractionMap constant(Vector value);

  Vector operator()(const Eigen::Ref<const Vector>& x) const;
  double alpha() const { return alpha_; }
  const std::string& label() const { return label_; }

private:
  std::function<Vector(const Vector&)> rule_;
  double alpha_;
  std::string label_;
};

/// Nonexpansive self-map. Built-in atoms cover the coordinatewise
/// transcendental maps used throughout, identities, metric projections and
/// convex combinations of other nonexpansive maps.
class NonexpansiveMap {
public:
  NonexpansiveMap(std::function<Vector(const Vector&)> rule, std::string label);

  static NonexpansiveMap identity();
  static NonexpansiveMap sine();
  static NonexpansiveMap cosine();
  static NonexpansiveMap arctangent();
  static NonexpansiveMap projection(ConvexSet set);
  /// t * a + (1 - t) * b with t in [0, 1]; nonexpansive by convexity.
  static NonexpansiveMap convex_combination(double t, NonexpansiveMap a, NonexpansiveMap b);

  /// Parses an atom label: "sin", "cos", "atan", "id", "proj:lo,hi".
  static NonexpansiveMap from_label(const std::string& label);

  Vector operator()(const Eigen::Ref<const Vector>& x) const;
  const std::string& label() const { return label_; }

private:
  std::function<Vector(const Vector&)> rule_;
  std::string label_;
};

struct SampleBox {
  Vector lo, hi;
};

/// Sampled Lipschitz ratio sup ||f(x)-f(y)|| / ||x-y|| over `trials` pairs
/// drawn uniformly from the box with the given seed. Deterministic for a
/// fixed seed; near-coincident pairs are skipped.
double lipschitz_estimate(const std::function<Vector(const Vector&)>& map, const SampleBox& box,
                          int trials, std::uint64_t seed);
double lipschitz_estimate(const NonexpansiveMap& map, const SampleBox& box, int trials,
                          std::uint64_t seed);

}  // namespace cofix
