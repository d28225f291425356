#pragma once

#include "cofix/hilbert.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cofix {

/// How a finite list of maps stands in for an infinite family.
enum class Extension {
  Cycle,        // T_i = listed[(i - 1) mod N]
  IdentityPad,  // T_i = I for i > N, so the cascaded map freezes at level N
};

/// Countable family of nonexpansive maps T_1, T_2, ... with per-level
/// weights gamma_i in (0, gamma_max], gamma_max < 1, combined through the
/// backward cascade
///
///   U_{n,n+1} = I,
///   U_{n,k}(x) = gamma_k T_k(U_{n,k+1}(x)) + (1 - gamma_k) x,
///   W_n = U_{n,1}.
///
/// Immutable after construction; evaluation is const and safe to run
/// concurrently.
class WFamily {
public:
  /// Listed weights are recycled with their last entry repeated, mirroring
  /// the map extension. gamma_max is the largest listed weight.
  WFamily(std::vector<NonexpansiveMap> maps, std::vector<double> weights,
          Extension ext = Extension::Cycle);

  /// Arbitrary weight rule i -> gamma_i (1-based); every produced value is
  /// validated against (0, gamma_max] at use.
  static WFamily with_weight_rule(std::vector<NonexpansiveMap> maps,
                                  std::function<double(int)> rule, double gamma_max,
                                  Extension ext = Extension::Cycle);

  const NonexpansiveMap& map_at(int i) const;
  double weight_at(int i) const;
  double gamma_max() const { return gamma_max_; }
  int listed_size() const { return static_cast<int>(maps_.size()); }
  Extension extension() const { return ext_; }
  std::string describe() const;

private:
  WFamily(std::vector<NonexpansiveMap> maps, std::function<double(int)> rule, double gamma_max,
          Extension ext, std::string weight_desc);

  std::vector<NonexpansiveMap> maps_;
  std::function<double(int)> weight_rule_;
  double gamma_max_;
  Extension ext_;
  std::string weight_desc_;
};

/// Partial cascade U_{n,k}(x); exactly n - k + 1 map evaluations.
/// Requires n >= 1 and 1 <= k <= n + 1.
Vector apply_u(const WFamily& family, int n, int k, const Eigen::Ref<const Vector>& x);

/// W_n(x) = U_{n,1}(x).
Vector apply_w(const WFamily& family, int n, const Eigen::Ref<const Vector>& x);

struct WLimitResult {
  Vector value;
  int n_used = 0;
  bool converged = false;
  double last_increment = 0.0;
};

/// Runs W_n(x) upward in n until consecutive values differ by less than tol,
/// returning that W_n(x) and the n reached. The cascade is Cauchy in n
/// because level increments are damped by the product of the weights.
WLimitResult apply_w_limit(const WFamily& family, const Eigen::Ref<const Vector>& x, double tol,
                           int n_max);

/// Finite family T_1..T_N with a row of weights lambda_{n,i} per step index n,
/// combined through the forward cascade
///
///   U_{n,1} = lambda_{n,1} T_1 + (1 - lambda_{n,1}) I,
///   U_{n,i} = lambda_{n,i} T_i U_{n,i-1} + (1 - lambda_{n,i}) U_{n,i-1},
///   K_n = U_{n,N}.
///
/// Weight rows must satisfy lambda_{n,i} in (0, 1) for i < N and
/// lambda_{n,N} in (0, 1].
class KFamily {
public:
  /// Step-independent weights; these double as the limit row.
  KFamily(std::vector<NonexpansiveMap> maps, std::vector<double> weights);

  /// Weight rule (n, i) -> lambda_{n,i} with an optional limit row for the
  /// limiting map K.
  static KFamily with_weight_rule(std::vector<NonexpansiveMap> maps,
                                  std::function<double(int, int)> rule,
                                  std::optional<std::vector<double>> limit_weights);

  int size() const { return static_cast<int>(maps_.size()); }
  const NonexpansiveMap& map_at(int i) const;
  double weight_at(int n, int i) const;
  bool has_limit_weights() const { return limit_weights_.has_value(); }
  const std::vector<double>& limit_weights() const;
  std::string describe() const;

private:
  KFamily(std::vector<NonexpansiveMap> maps, std::function<double(int, int)> rule,
          std::optional<std::vector<double>> limit_weights, std::string weight_desc);

  std::vector<NonexpansiveMap> maps_;
  std::function<double(int, int)> weight_rule_;
  std::optional<std::vector<double>> limit_weights_;
  std::string weight_desc_;
};

/// K_n(x); exactly N map evaluations. Requires n >= 1.
Vector apply_k(const KFamily& family, int n, const Eigen::Ref<const Vector>& x);

/// Limiting map K(x) built from the limit weight row. Throws when the family
/// carries no limit row.
Vector apply_k_limit(const KFamily& family, const Eigen::Ref<const Vector>& x);

/// ||x - T(x)||; zero iff x is a fixed point of T.
double fixed_point_residual(const NonexpansiveMap& map, const Eigen::Ref<const Vector>& x);
double fixed_point_residual(const std::function<Vector(const Vector&)>& map,
                            const Eigen::Ref<const Vector>& x);

}  // namespace cofix
