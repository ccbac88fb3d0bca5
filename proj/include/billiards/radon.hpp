#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "billiards/geometry.hpp"
#include "billiards/tori.hpp"

namespace billiards {

// Real function on the boundary. of_s takes arclength; of_x, when present,
// takes the Liouville x coordinate.
struct BoundaryFunction {
  std::function<double(double)> of_s;
  std::function<double(double)> of_x;
  int smoothness = -1;  // C^ℓ class, −1 for smooth

  double operator()(double s) const { return of_s(s); }
};

struct TrigTerm {
  bool cosine = true;
  int n = 0;
  double amp = 0.0;
};

// Σ amp·cos(nθ) / amp·sin(nθ). With in_x the angle θ is the native
// parameter of the curve (the Liouville x on an ellipse), otherwise θ = 2πs/L.
BoundaryFunction trig_boundary_function(const BoundaryCurve& curve, std::vector<TrigTerm> terms, bool in_x);

// {"variable":"x"|"s","terms":[{"kind":"cos"|"sin","n":…,"amp":…}]}
BoundaryFunction parse_boundary_function(const BoundaryCurve& curve, const nlohmann::json& spec);

// Z2 ⊕ Z2 generated by s ↦ −s and s ↦ L/2 − s. Element 3 is their
// composition s ↦ s + L/2.
class SymmetryGroup {
 public:
  explicit SymmetryGroup(double length) : length_(length) {}
  static constexpr int size() { return 4; }
  double length() const { return length_; }
  double act(int element, double s) const;
  // Lift to phase space: reflections reverse orientation and flip ξ.
  PhasePoint act(int element, PhasePoint p) const;

 private:
  double length_;
};

BoundaryFunction symmetry_average(const BoundaryFunction& K, const SymmetryGroup& G);

struct InvariantValue {
  double value = 0.0;
  int nodes = 0;
  double est_error = 0.0;
};

struct QuadratureOptions {
  int initial_nodes = 2048;
  int max_nodes = 1 << 17;
  double tol = 1e-9;
  double glance_eps = kDefaultGlanceEps;
};

// Σ_j ∫_{Λ_j} K(s)/sinθ dμ_j, periodic trapezoid with node doubling.
InvariantValue torus_invariant(const std::vector<InvariantCircle>& circles, const BoundaryFunction& K,
                               const QuadratureOptions& options = {});

enum class LiouvilleBranch { Rotational, TwoBounce };

struct LiouvilleRadon {
  double R_plus = 0.0;
  double R_minus = 0.0;
  LiouvilleBranch branch = LiouvilleBranch::Rotational;
  // ∫ dx/√(f−h) over the circle: [0, 2π] on the rotational branch, twice the
  // x-interval of one component on the two-bounce branch.
  double leray_mass = 0.0;
};

// Rotational branch h ∈ (q(N), 0): R_± = ±(h − q(N))^{−1/2} ∫_0^{2π} K √((f − q(N))/(f − h)) dx.
// Two-bounce branch h ∈ (0, max f): R_plus is the component over {f > h} ∩ (0, π),
// R_minus minus the component over (π, 2π).
LiouvilleRadon liouville_radon(const LiouvilleTable& table, const std::function<double(double)>& Kx, double h);

double leray_mass(const LiouvilleTable& table, double h);

struct BouncingBallCheck {
  double residual = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double hausdorff = 0.0;
  int exchanging_element = 0;
};

// Λ1, Λ2 two components of a level set exchanged by a symmetry.
BouncingBallCheck bouncing_ball_identity_check(const InvariantCircle& lambda1, const InvariantCircle& lambda2,
                                               const BoundaryFunction& K, const SymmetryGroup& G,
                                               double hausdorff_tol = 1e-6);

// Columns h_or_omega, invariant_value, quadrature_nodes, est_error.
void write_invariant_csv_header(std::ostream& out);
void write_invariant_csv_row(std::ostream& out, double h_or_omega, const InvariantValue& v);

}  // namespace billiards
