#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "billiards/numerics.hpp"

namespace billiards {

// Closed convex planar boundary, arclength-parametrized and oriented
// counterclockwise. Immutable; copies share the underlying tables.
class BoundaryCurve {
 public:
  enum class Kind { Circle, Ellipse, Fourier };

  static BoundaryCurve circle(double radius);
  // Starts at (a, 0) and runs counterclockwise. Requires a >= b > 0.
  static BoundaryCurve ellipse(double a, double b);
  // Radial function r(φ) = c[0] + Σ_k c[2k-1] cos kφ + c[2k] sin kφ.
  static BoundaryCurve fourier(std::vector<double> coeffs);

  Kind kind() const;
  double total_length() const;

  Vec2 position(double s) const;
  Vec2 tangent(double s) const;
  Vec2 inward_normal(double s) const;
  double curvature(double s) const;

  // Native parameter t ∈ [0, 2π): polar angle for circles and Fourier
  // curves, eccentric angle for ellipses. arclength_at accepts any real t
  // and returns the lifted arclength.
  double param_at(double s) const;
  double arclength_at(double t) const;
  Vec2 position_at_param(double t) const;
  Vec2 velocity_at_param(double t) const;
  double speed_at_param(double t) const { return velocity_at_param(t).norm(); }
  double curvature_at_param(double t) const;

  // Semi-axes (a, b) for circles and ellipses.
  std::optional<std::pair<double, double>> semi_axes() const;
  // Minimum curvature over a uniform parameter grid.
  double min_curvature(int samples = 4096) const;
  bool is_convex() const { return min_curvature() > 0.0; }

  // Native parameter of the second boundary intersection of the ray origin + u·dir,
  // u > 0, where origin sits on the boundary at parameter t0.
  double ray_exit_param(double t0, Vec2 origin, Vec2 dir) const;

 private:
  struct Impl;
  explicit BoundaryCurve(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Evaluator returning the derivative of the given order at a point.
using DerivativeFn = std::function<double(int order, double x)>;

// Two-dimensional Liouville billiard table in cylinder coordinates (x, y),
// metric (f(x) − q(y))(dx² + dy²), boundary at y = ±N.
struct LiouvilleTable {
  DerivativeFn f;
  DerivativeFn q;
  double N = 1.0;
  std::string family = "custom";
  // Focal parameter of the elliptic family; zero otherwise.
  double c = 0.0;

  // Elliptic coordinates: f = c² sin²x, q = −c² sinh²y. The boundary is the
  // ellipse with semi-axes (c cosh N, c sinh N) and x is its eccentric angle.
  static LiouvilleTable ellipse(double c, double N);

  double qN() const { return q(0, N); }
  bool is_ellipse() const { return family == "ellipse"; }
  BoundaryCurve boundary_curve() const;
};

struct ConditionCheck {
  std::string name;
  bool pass = true;
  std::optional<int> first_violated_order;
  std::string detail;
};

struct LiouvilleReport {
  std::vector<ConditionCheck> conditions;
  bool classical_type = true;
};

// Checks the classical-type conditions: positivity of f − q on the table,
// evenness and periodicity of f and q, and the gluing condition f^(2k)(πl) = (−1)^k q^(2k)(0) is checked for
// k = 1..k_check.
LiouvilleReport liouville_validate(const LiouvilleTable& table, int k_check = 4);

// Parsed domain-spec record. For liouville domains of the elliptic family the
// curve is the Euclidean ellipse realizing the table.
struct Domain {
  std::optional<BoundaryCurve> curve;
  std::optional<LiouvilleTable> table;
};

// {"type":"ellipse","a":…,"b":…} | {"type":"circle","r":…} |
// {"type":"liouville","family":"ellipse","c":…,"N":…} | {"type":"fourier","coeffs":[…]}
Domain parse_domain(const nlohmann::json& spec);

}  // namespace billiards
