#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "billiards/billiard.hpp"

namespace billiards {

enum class RotationMethod { WeightedAverage, OrderBased, ClosedForm };

struct RotationData {
  double omega = 0.0;
  double error_estimate = 0.0;
  RotationMethod method = RotationMethod::WeightedAverage;
};

struct RotationOptions {
  // Optional first integral checked along the orbit.
  std::function<double(PhasePoint)> conserved;
  double conserved_tol = 1e-8;
  double fallback_threshold = 1e-6;
};

// Lifted rotation number of a boundary orbit, in turns per bounce, in [0, 1).
RotationData rotation_number(const std::vector<PhasePoint>& orbit, double lift,
                             const RotationOptions& options = {});

struct DiophantineWitness {
  double kappa_hat = 0.0;
  double tau = 1.0;
  int k_max = 1;
  std::vector<int> argmin_k;
  long argmin_kn = 0;
};

DiophantineWitness diophantine_kappa(const std::vector<double>& omega, double tau, int k_max);

struct CircleOptions {
  int period = 1;                   // the circle is invariant under B^period
  std::optional<PhasePoint> center; // librational circles: angle measured around this point
  int orbit_length = 8192;
  int max_refinements = 3;          // orbit doubled on each refinement
  double tol = 1e-8;
  int resonance_kmax = 50;
  double resonance_tol = 1e-9;
  int residual_grid = 512;
};

// Invariant circle of P = B^period with conjugacy P(F(φ)) = F(φ − 2πω).
// Rotational circles: s(φ) = Lφ/2π + periodic part. Librational circles:
// s(φ) is periodic.
struct InvariantCircle {
  RotationData omega;  // un-reduced normal-form datum; the angle advances by −2πω per return
  int period = 1;
  bool rotational = true;
  double length = 0.0;
  std::vector<std::complex<double>> s_coeffs;   // periodic part of s
  std::vector<std::complex<double>> xi_coeffs;
  double residual = 0.0;
  int orbit_samples = 0;

  double advance() const { return -omega.omega; }
  double s_lift(double phi) const;
  double ds_dphi(double phi) const;
  PhasePoint at(double phi) const;  // s reduced to [0, length)
  // Nodes of the normalized measure dφ/2π (uniform trapezoid).
  std::vector<std::pair<PhasePoint, double>> measure(int nodes = 1024) const;
};

InvariantCircle circle_conjugacy(const BoundaryCurve& curve, PhasePoint seed, int n_modes,
                                 const CircleOptions& options = {});

// Closed-form rotational circle {ξ = const} of a disk, s(φ) = s0 + rφ.
// Valid for rational rotation numbers too.
InvariantCircle exact_disk_circle(const BoundaryCurve& disk, double xi, double s0 = 0.0);

// B(Λ) as a circle of the same period, parametrized by φ ↦ B(F(φ)).
InvariantCircle mapped_circle(const BoundaryCurve& curve, const InvariantCircle& circle, int grid = 1024);

// One-parameter family of seeds crossing nearby circles, used for the
// second derivative of L.
struct CircleFamily {
  std::function<PhasePoint(double)> seed;
  double param = 0.0;   // parameter of the base circle
  double dparam = 1e-3; // first secant step
  int n_modes = 64;
  CircleOptions options;
};

struct ActionData {
  double I0 = 0.0;
  double L0 = 0.0;
  double gradL = 0.0;
  std::optional<double> hessL;
  double A_avg = 0.0;
  // L0 − I0·gradL − A_avg with L0 from the generating function along the circle.
  double identity_residual = 0.0;
};

ActionData action_data(const BoundaryCurve& curve, const InvariantCircle& circle,
                       const CircleFamily* family = nullptr, int nodes = 1024);

struct FixedPointData {
  std::vector<double> alpha;  // eigenvalue phases in turns, e^{±2πiα}
  double trace = 0.0;
  double determinant = 0.0;
  bool elliptic = false;
  bool resonant_order4 = false;
};

FixedPointData elliptic_fixed_point_data(const BoundaryCurve& curve,
                                         const std::vector<PhasePoint>& periodic_orbit);

// True when ⟨α,k⟩ is an integer (to tol) for some 0 < Σ|k| ≤ order.
bool has_low_order_resonance(const std::vector<double>& alpha, int order = 4, double tol = 1e-10);

// Conserved quantity of the elliptic billiard (circle included):
// c² sin²t − ξ²(c² sin²t + b²), t the eccentric angle.
double ellipse_first_integral(const BoundaryCurve& curve, PhasePoint p);

void write_circle_csv(std::ostream& out, const BoundaryCurve& curve, const InvariantCircle& circle,
                      int nodes = 256);
nlohmann::json to_json(const ActionData& data);
nlohmann::json to_json(const RotationData& data);

}  // namespace billiards
