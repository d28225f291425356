#include "cofix/families.hpp"

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

std::string join_labels(const std::vector<NonexpansiveMap>& maps) {
  std::ostringstream os;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (i) os << ',';
    os << maps[i].label();
  }
  return os.str();
}

std::string join_values(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << fmt(v[i]);
  }
  return os.str();
}

}  // namespace

WFamily::WFamily(std::vector<NonexpansiveMap> maps, std::function<double(int)> rule,
                 double gamma_max, Extension ext, std::string weight_desc)
    : maps_(std::move(maps)),
      weight_rule_(std::move(rule)),
      gamma_max_(gamma_max),
      ext_(ext),
      weight_desc_(std::move(weight_desc)) {
  if (maps_.empty()) throw std::invalid_argument("WFamily: need at least one map");
  if (!(gamma_max_ > 0.0) || !(gamma_max_ < 1.0))
    throw std::invalid_argument("WFamily: gamma_max must lie in (0, 1)");
}

namespace {

double checked_gamma_max(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("WFamily: need at least one weight");
  double gmax = 0.0;
  for (double g : weights) {
    if (!(g > 0.0) || !(g < 1.0))
      throw std::invalid_argument("WFamily: listed weight " + fmt(g) + " outside (0, 1)");
    gmax = std::max(gmax, g);
  }
  return gmax;
}

}  // namespace

WFamily::WFamily(std::vector<NonexpansiveMap> maps, std::vector<double> weights, Extension ext)
    : WFamily(std::move(maps),
              [table = weights](int i) {
                const auto idx =
                    std::min(static_cast<std::size_t>(i - 1), table.size() - 1);
                return table[idx];
              },
              checked_gamma_max(weights), ext, "table:" + join_values(weights)) {}

WFamily WFamily::with_weight_rule(std::vector<NonexpansiveMap> maps,
                                  std::function<double(int)> rule, double gamma_max,
                                  Extension ext) {
  if (!rule) throw std::invalid_argument("WFamily: empty weight rule");
  return WFamily(std::move(maps), std::move(rule), gamma_max, ext, "rule");
}

const NonexpansiveMap& WFamily::map_at(int i) const {
  if (i < 1) throw std::invalid_argument("WFamily::map_at: index must be >= 1");
  const int n = listed_size();
  if (i <= n) return maps_[i - 1];
  if (ext_ == Extension::Cycle) return maps_[(i - 1) % n];
  static const NonexpansiveMap pad = NonexpansiveMap::identity();
  return pad;
}

double WFamily::weight_at(int i) const {
  if (i < 1) throw std::invalid_argument("WFamily::weight_at: index must be >= 1");
  const double g = weight_rule_(i);
  if (!(g > 0.0) || g > gamma_max_)
    throw std::domain_error("WFamily: weight " + fmt(g) + " at level " + std::to_string(i) +
                            " outside (0, " + fmt(gamma_max_) + "]");
  return g;
}

std::string WFamily::describe() const {
  return "w maps=" + join_labels(maps_) + " weights=" + weight_desc_ +
         " extend=" + (ext_ == Extension::Cycle ? "cycle" : "pad");
}

Vector apply_u(const WFamily& family, int n, int k, const Eigen::Ref<const Vector>& x) {
  if (n < 1) throw std::invalid_argument("apply_u: level must be >= 1");
  if (k < 1 || k > n + 1) throw std::invalid_argument("apply_u: need 1 <= k <= n + 1");
  require_point(x, "apply_u input");
  Vector u = x;
  for (int j = n; j >= k; --j) {
    const double g = family.weight_at(j);
    u = g * family.map_at(j)(u) + (1.0 - g) * x;
  }
  return u;
}

Vector apply_w(const WFamily& family, int n, const Eigen::Ref<const Vector>& x) {
  return apply_u(family, n, 1, x);
}

WLimitResult apply_w_limit(const WFamily& family, const Eigen::Ref<const Vector>& x, double tol,
                           int n_max) {
  if (!(tol > 0.0)) throw std::invalid_argument("apply_w_limit: tolerance must be positive");
  if (n_max < 1) throw std::invalid_argument("apply_w_limit: n_max must be >= 1");
  require_point(x, "apply_w_limit input");

  Vector prev = apply_w(family, 1, x);
  for (int n = 1; n <= n_max; ++n) {
    Vector next = apply_w(family, n + 1, x);
    const double inc = (next - prev).norm();
    if (inc < tol) return {std::move(prev), n, true, inc};
    prev = std::move(next);
  }
  return {std::move(prev), n_max, false, 0.0};
}

KFamily::KFamily(std::vector<NonexpansiveMap> maps, std::function<double(int, int)> rule,
                 std::optional<std::vector<double>> limit_weights, std::string weight_desc)
    : maps_(std::move(maps)),
      weight_rule_(std::move(rule)),
      limit_weights_(std::move(limit_weights)),
      weight_desc_(std::move(weight_desc)) {
  if (maps_.empty()) throw std::invalid_argument("KFamily: need at least one map");
  if (limit_weights_ && limit_weights_->size() != maps_.size())
    throw std::invalid_argument("KFamily: limit weight row length must match the map count");
}

namespace {

void check_k_weight(double lam, int i, int n_maps, const std::string& where) {
  const bool last = (i == n_maps);
  const bool ok = last ? (lam > 0.0 && lam <= 1.0) : (lam > 0.0 && lam < 1.0);
  if (!ok) {
    const char* range = last ? "(0, 1]" : "(0, 1)";
    throw std::domain_error("KFamily: " + where + " weight " + std::to_string(i) + " = " +
                            fmt(lam) + " outside " + range);
  }
}

}  // namespace

KFamily::KFamily(std::vector<NonexpansiveMap> maps, std::vector<double> weights)
    : KFamily(
          std::move(maps), [table = weights](int, int i) { return table[i - 1]; }, weights,
          "const:" + join_values(weights)) {
  for (int i = 1; i <= size(); ++i) check_k_weight(weights[i - 1], i, size(), "listed");
}

KFamily KFamily::with_weight_rule(std::vector<NonexpansiveMap> maps,
                                  std::function<double(int, int)> rule,
                                  std::optional<std::vector<double>> limit_weights) {
  if (!rule) throw std::invalid_argument("KFamily: empty weight rule");
  return KFamily(std::move(maps), std::move(rule), std::move(limit_weights), "rule");
}

const NonexpansiveMap& KFamily::map_at(int i) const {
  if (i < 1 || i > size()) throw std::invalid_argument("KFamily::map_at: index out of range");
  return maps_[i - 1];
}

double KFamily::weight_at(int n, int i) const {
  if (n < 1) throw std::invalid_argument("KFamily::weight_at: step index must be >= 1");
  if (i < 1 || i > size()) throw std::invalid_argument("KFamily::weight_at: index out of range");
  const double lam = weight_rule_(n, i);
  check_k_weight(lam, i, size(), "step " + std::to_string(n));
  return lam;
}

const std::vector<double>& KFamily::limit_weights() const {
  if (!limit_weights_) throw std::logic_error("KFamily: no limit weight row available");
  return *limit_weights_;
}

std::string KFamily::describe() const {
  return "k maps=" + join_labels(maps_) + " weights=" + weight_desc_;
}

namespace {

Vector k_cascade(const KFamily& family, const Eigen::Ref<const Vector>& x,
                 const std::function<double(int)>& lam_at) {
  Vector u = x;
  for (int i = 1; i <= family.size(); ++i) {
    const double lam = lam_at(i);
    u = lam * family.map_at(i)(u) + (1.0 - lam) * u;
  }
  return u;
}

}  // namespace

Vector apply_k(const KFamily& family, int n, const Eigen::Ref<const Vector>& x) {
  if (n < 1) throw std::invalid_argument("apply_k: step index must be >= 1");
  require_point(x, "apply_k input");
  return k_cascade(family, x, [&](int i) { return family.weight_at(n, i); });
}

Vector apply_k_limit(const KFamily& family, const Eigen::Ref<const Vector>& x) {
  require_point(x, "apply_k_limit input");
  const std::vector<double>& row = family.limit_weights();
  for (int i = 1; i <= family.size(); ++i) check_k_weight(row[i - 1], i, family.size(), "limit");
  return k_cascade(family, x, [&](int i) { return row[i - 1]; });
}

double fixed_point_residual(const NonexpansiveMap& map, const Eigen::Ref<const Vector>& x) {
  require_point(x, "fixed_point_residual input");
  return (x - map(x)).norm();
}

double fixed_point_residual(const std::function<Vector(const Vector&)>& map,
                            const Eigen::Ref<const Vector>& x) {
  require_point(x, "fixed_point_residual input");
  return (x - map(x)).norm();
}

}  // namespace cofix
