#include "cofix/hilbert.hpp"

#include <cmath>
#include <random>
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

void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix is not symmetric");
}

}  // namespace

bool is_valid_point(const Eigen::Ref<const Vector>& x) {
  return x.size() > 0 && x.allFinite();
}

void require_point(const Eigen::Ref<const Vector>& x, const std::string& what) {
  if (!is_valid_point(x))
    throw std::invalid_argument(what + ": expected a nonempty vector with finite entries");
}

Vector make_point(std::initializer_list<double> coords) {
  Vector x(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) x[i++] = c;
  return x;
}

double inner(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner: dimension mismatch");
  require_point(u, "inner lhs");
  require_point(v, "inner rhs");
  return u.dot(v);
}

ConvexSet ConvexSet::whole_space() { return ConvexSet(Rep{WholeSpace{}}); }

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  require_point(lo, "box lower corner");
  require_point(hi, "box upper corner");
  if (lo.size() != hi.size()) throw std::invalid_argument("box: corner dimension mismatch");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("box: lo exceeds hi");
  return ConvexSet(Rep{Box{std::move(lo), std::move(hi)}});
}

ConvexSet ConvexSet::interval(double lo, double hi) {
  return box(make_point({lo}), make_point({hi}));
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  require_point(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball: radius must be positive and finite");
  return ConvexSet(Rep{Ball{std::move(center), radius}});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_point(normal, "halfspace normal");
  if (!std::isfinite(offset)) throw std::invalid_argument("halfspace: offset must be finite");
  if (normal.norm() == 0.0) throw std::invalid_argument("halfspace: normal must be nonzero");
  return ConvexSet(Rep{Halfspace{std::move(normal), offset}});
}

bool ConvexSet::is_whole_space() const { return std::holds_alternative<WholeSpace>(rep_); }

int ConvexSet::dimension() const {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeSpace>) return -1;
        else if constexpr (std::is_same_v<S, Box>) return static_cast<int>(s.lo.size());
        else if constexpr (std::is_same_v<S, Ball>) return static_cast<int>(s.center.size());
        else return static_cast<int>(s.normal.size());
      },
      rep_);
}

bool ConvexSet::contains(const Eigen::Ref<const Vector>& x, double tol) const {
  return set_residual(*this, x) <= tol;
}

std::string ConvexSet::describe() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeSpace>) return "all";
        else if constexpr (std::is_same_v<S, Box>) {
          if (s.lo.size() == 1) return "box:" + fmt(s.lo[0]) + "," + fmt(s.hi[0]);
          return "box:" + fmt_vector(s.lo) + ";" + fmt_vector(s.hi);
        } else if constexpr (std::is_same_v<S, Ball>)
          return "ball:" + fmt_vector(s.center) + "," + fmt(s.radius);
        else return "halfspace:" + fmt_vector(s.normal) + ";" + fmt(s.offset);
      },
      rep_);
}

Vector project(const ConvexSet& set, const Eigen::Ref<const Vector>& x) {
  require_point(x, "projection input");
  return std::visit(
      [&x](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConvexSet::WholeSpace>) {
          return x;
        } else if constexpr (std::is_same_v<S, ConvexSet::Box>) {
          if (x.size() != s.lo.size())
            throw std::invalid_argument("project: point dimension does not match box");
          return x.cwiseMax(s.lo).cwiseMin(s.hi);
        } else if constexpr (std::is_same_v<S, ConvexSet::Ball>) {
          if (x.size() != s.center.size())
            throw std::invalid_argument("project: point dimension does not match ball");
          Vector d = x - s.center;
          const double norm = d.norm();
          if (norm <= s.radius) return x;
          return s.center + (s.radius / norm) * d;
        } else {
          if (x.size() != s.normal.size())
            throw std::invalid_argument("project: point dimension does not match halfspace");
          const double slack = s.normal.dot(x) - s.offset;
          if (slack <= 0.0) return x;
          return x - (slack / s.normal.squaredNorm()) * s.normal;
        }
      },
      set.rep_);
}

double set_residual(const ConvexSet& set, const Eigen::Ref<const Vector>& x) {
  return (x - project(set, x)).norm();
}

StrongPositiveOp StrongPositiveOp::from_matrix(Matrix m) {
  const double gb = strong_positivity_coefficient(m);
  if (!(gb > 0.0))
    throw std::invalid_argument("operator is not strongly positive (smallest eigenvalue " +
                                fmt(gb) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const double on = eig.eigenvalues().cwiseAbs().maxCoeff();
  std::string desc = "matrix:" + std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  return StrongPositiveOp(std::move(m), gb, on, std::move(desc));
}

StrongPositiveOp StrongPositiveOp::scaled_identity(int dim, double c) {
  if (dim < 1) throw std::invalid_argument("scaled_identity: dimension must be positive");
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("scaled_identity: scale must be positive and finite");
  Matrix m = c * Matrix::Identity(dim, dim);
  return StrongPositiveOp(std::move(m), c, c, "scaled_identity:" + fmt(c));
}

Vector StrongPositiveOp::apply(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != m_.rows())
    throw std::invalid_argument("StrongPositiveOp: point dimension mismatch");
  return m_ * x;
}

std::string StrongPositiveOp::describe() const { return desc_; }

double strong_positivity_coefficient(const Matrix& m) {
  require_symmetric(m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

std::pair<double, double> damped_operator_norm_bound(const StrongPositiveOp& a, double rho) {
  if (!(rho > 0.0) || rho > 1.0 / a.op_norm())
    throw std::invalid_argument("damped_operator_norm_bound: need 0 < rho <= 1/||A||");
  const int n = a.dimension();
  const Matrix damped = Matrix::Identity(n, n) - rho * a.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(damped, Eigen::EigenvaluesOnly);
  const double exact = eig.eigenvalues().cwiseAbs().maxCoeff();
  return {exact, 1.0 - rho * a.gamma_bar()};
}

ContractionMap::ContractionMap(std::function<Vector(const Vector&)> rule, double alpha,
                               std::string label)
    : rule_(std::move(rule)), alpha_(alpha), label_(std::move(label)) {
  if (!rule_) throw std::invalid_argument("ContractionMap: empty rule");
  if (!(alpha_ > 0.0) || !(alpha_ < 1.0))
    throw std::invalid_argument("ContractionMap: modulus must lie in (0, 1)");
}

ContractionMap ContractionMap::linear(double c) {
  if (!(std::abs(c) < 1.0))
    throw std::invalid_argument("ContractionMap::linear: need |c| < 1");
  const double alpha = std::max(std::abs(c), 1e-6);
  return ContractionMap([c](const Vector& x) -> Vector { return c * x; }, alpha,
                        "linear:" + fmt(c));
}

ContractionMap ContractionMap::constant(Vector value) {
  require_point(value, "constant contraction value");
  std::string label = "const:" + fmt_vector(value);
  return ContractionMap([v = std::move(value)](const Vector&) -> Vector { return v; }, 1e-6,
                        std::move(label));
}

Vector ContractionMap::operator()(const Eigen::Ref<const Vector>& x) const {
  require_point(x, "contraction input");
  Vector out = rule_(x);
  require_point(out, "contraction output");
  return out;
}

NonexpansiveMap::NonexpansiveMap(std::function<Vector(const Vector&)> rule, std::string label)
    : rule_(std::move(rule)), label_(std::move(label)) {
  if (!rule_) throw std::invalid_argument("NonexpansiveMap: empty rule");
}

NonexpansiveMap NonexpansiveMap::identity() {
  return NonexpansiveMap([](const Vector& x) -> Vector { return x; }, "id");
}

NonexpansiveMap NonexpansiveMap::sine() {
  return NonexpansiveMap([](const Vector& x) -> Vector { return x.array().sin(); }, "sin");
}

NonexpansiveMap NonexpansiveMap::cosine() {
  return NonexpansiveMap([](const Vector& x) -> Vector { return x.array().cos(); }, "cos");
}

NonexpansiveMap NonexpansiveMap::arctangent() {
  return NonexpansiveMap([](const Vector& x) -> Vector { return x.array().atan(); }, "atan");
}

NonexpansiveMap NonexpansiveMap::projection(ConvexSet set) {
  // Interval projections get the parseable label form "proj:lo,hi" so the
  // label round-trips through from_label; other shapes are display-only.
  const std::string desc = set.describe();
  std::string label = desc.rfind("box:", 0) == 0 && desc.find(';') == std::string::npos
                          ? "proj:" + desc.substr(4)
                          : "proj:" + desc;
  return NonexpansiveMap(
      [s = std::move(set)](const Vector& x) -> Vector { return project(s, x); },
      std::move(label));
}

NonexpansiveMap NonexpansiveMap::convex_combination(double t, NonexpansiveMap a,
                                                    NonexpansiveMap b) {
  if (!(t >= 0.0) || !(t <= 1.0))
    throw std::invalid_argument("convex_combination: weight must lie in [0, 1]");
  std::string label = "comb:" + fmt(t) + "(" + a.label() + "," + b.label() + ")";
  return NonexpansiveMap(
      [t, a = std::move(a), b = std::move(b)](const Vector& x) -> Vector {
        return t * a(x) + (1.0 - t) * b(x);
      },
      std::move(label));
}

NonexpansiveMap NonexpansiveMap::from_label(const std::string& label) {
  if (label == "id") return identity();
  if (label == "sin") return sine();
  if (label == "cos") return cosine();
  if (label == "atan") return arctangent();
  if (label.rfind("proj:", 0) == 0) {
    const std::string body = label.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("map label 'proj:' expects lo,hi");
    try {
      const double lo = std::stod(body.substr(0, comma));
      const double hi = std::stod(body.substr(comma + 1));
      return projection(ConvexSet::interval(lo, hi));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("map label 'proj:' expects numeric lo,hi");
    }
  }
  throw std::invalid_argument("unknown map label '" + label + "'");
}

Vector NonexpansiveMap::operator()(const Eigen::Ref<const Vector>& x) const {
  require_point(x, "nonexpansive map input");
  Vector out = rule_(x);
  require_point(out, "nonexpansive map output");
  if (out.size() != x.size())
    throw std::invalid_argument("nonexpansive map must preserve dimension");
  return out;
}

double lipschitz_estimate(const std::function<Vector(const Vector&)>& map, const SampleBox& box,
                          int trials, std::uint64_t seed) {
  require_point(box.lo, "sample box lower corner");
  require_point(box.hi, "sample box upper corner");
  if (box.lo.size() != box.hi.size())
    throw std::invalid_argument("lipschitz_estimate: box corner dimension mismatch");
  if ((box.lo.array() > box.hi.array()).any())
    throw std::invalid_argument("lipschitz_estimate: box lo exceeds hi");
  if (trials < 1) throw std::invalid_argument("lipschitz_estimate: need at least one trial");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index dim = box.lo.size();
  auto draw = [&]() {
    Vector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    return x;
  };

  double best = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vector x = draw();
    const Vector y = draw();
    const double gap = (x - y).norm();
    if (gap < 1e-14) continue;
    best = std::max(best, (map(x) - map(y)).norm() / gap);
  }
  return best;
}

double lipschitz_estimate(const NonexpansiveMap& map, const SampleBox& box, int trials,
                          std::uint64_t seed) {
  return lipschitz_estimate([&map](const Vector& x) { return map(x); }, box, trials, seed);
}

}  // namespace cofix
