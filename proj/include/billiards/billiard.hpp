#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

inline constexpr double kDefaultGlanceEps = 1e-6;

// Point (s, ξ) of the coball bundle: arclength and tangential momentum.
struct PhasePoint {
  double s = 0.0;
  double xi = 0.0;
};

// One chord of the billiard flow. The action is the chord length.
struct ChordData {
  PhasePoint source;
  PhasePoint target;
  double length = 0.0;
  double action = 0.0;
};

struct Bounce {
  PhasePoint next;
  ChordData chord;
};

// Billiard ball map: leave s with tangential momentum ξ, land at the next
// boundary point; the landing momentum is the tangential component of the
// incoming direction. The returned s is reduced to [0, total_length).
Bounce billiard_map(const BoundaryCurve& curve, PhasePoint p, double glance_eps = kDefaultGlanceEps);

// B^m(p), with the chord actions summed.
Bounce billiard_map_power(const BoundaryCurve& curve, PhasePoint p, int m,
                          double glance_eps = kDefaultGlanceEps);

struct Orbit {
  std::vector<PhasePoint> states;  // m + 1 states, states[0] is the start
  std::vector<ChordData> chords;   // m chords
  double total_length() const;
};

// m successive bounces. Failures are rethrown with the bounce index attached.
Orbit orbit(const BoundaryCurve& curve, PhasePoint p, int m, double glance_eps = kDefaultGlanceEps);

// (∂ℓ/∂s + ξ, ∂ℓ/∂s′ − ξ′) for the chord from s to s′, derivatives by central
// differences with step h, momenta from billiard_map.
std::pair<double, double> generating_residual(const BoundaryCurve& curve, double s, double s_prime,
                                              double h = 1e-5);

// Columns bounce_index, s, xi, chord_length, x, y; one row per departure state.
void write_orbit_csv(std::ostream& out, const BoundaryCurve& curve, const Orbit& orb);

struct InvariantCircle;

struct FlowoutResult {
  double value = 0.0;   // ∫_Λ ∫_0^ℓ V(chord(u)) du dμ
  double volume = 0.0;  // ∫_Λ ℓ dμ
  int nodes = 0;
};

// Integral of a planar potential over the flow-out of an invariant circle.
FlowoutResult flowout_integral(const BoundaryCurve& curve, const InvariantCircle& circle,
                               const std::function<double(Vec2)>& V, int nodes = 1024);

}  // namespace billiards
