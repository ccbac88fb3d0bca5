#include "billiards/billiard.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "billiards/errors.hpp"
#include "billiards/tori.hpp"

namespace billiards {

Bounce billiard_map(const BoundaryCurve& curve, PhasePoint p, double glance_eps) {
  if (!(std::abs(p.xi) <= 1.0 - glance_eps)) {
    throw Error(ErrorCode::GlancingRay, fmt::format("|xi|={:.17g} exceeds 1-{:g}", p.xi, glance_eps));
  }
  const double t0 = curve.param_at(p.s);
  const Vec2 origin = curve.position_at_param(t0);
  const Vec2 vel = curve.velocity_at_param(t0);
  const Vec2 tangent = vel * (1.0 / vel.norm());
  const Vec2 dir = tangent * p.xi + tangent.perp() * std::sqrt(1.0 - p.xi * p.xi);

  const double t1 = curve.ray_exit_param(t0, origin, dir);
  const Vec2 hit = curve.position_at_param(t1);
  const Vec2 chord = hit - origin;
  const double length = chord.norm();
  if (!(length > 0.0)) throw Error(ErrorCode::DegenerateChord, "zero-length chord");
  const Vec2 unit = chord * (1.0 / length);
  const Vec2 vel1 = curve.velocity_at_param(t1);
  const double xi1 = unit.dot(vel1) / vel1.norm();
  const double s1 = wrap(curve.arclength_at(t1), curve.total_length());

  Bounce out;
  out.next = {s1, xi1};
  out.chord = {p, out.next, length, length};
  return out;
}

Bounce billiard_map_power(const BoundaryCurve& curve, PhasePoint p, int m, double glance_eps) {
  require(m >= 1, ErrorCode::InvalidArgument, "map power must be >= 1");
  Bounce acc = billiard_map(curve, p, glance_eps);
  for (int i = 1; i < m; ++i) {
    const Bounce next = billiard_map(curve, acc.next, glance_eps);
    acc.next = next.next;
    acc.chord.target = next.next;
    acc.chord.length += next.chord.length;
    acc.chord.action += next.chord.action;
  }
  return acc;
}

double Orbit::total_length() const {
  double total = 0.0;
  for (const auto& c : chords) total += c.length;
  return total;
}

Orbit orbit(const BoundaryCurve& curve, PhasePoint p, int m, double glance_eps) {
  require(m >= 0, ErrorCode::InvalidArgument, "bounce count must be non-negative");
  Orbit orb;
  orb.states.reserve(m + 1);
  orb.chords.reserve(m);
  orb.states.push_back(p);
  for (int i = 0; i < m; ++i) {
    try {
      const Bounce b = billiard_map(curve, orb.states.back(), glance_eps);
      orb.states.push_back(b.next);
      orb.chords.push_back(b.chord);
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), i);
    }
  }
  return orb;
}

std::pair<double, double> generating_residual(const BoundaryCurve& curve, double s, double s_prime,
                                              double h) {
  const double L = curve.total_length();
  if (std::abs(wrap_centered(s_prime - s, L)) < 1e-9) {
    throw Error(ErrorCode::DegenerateChord, "chord endpoints coincide");
  }
  auto chord_length = [&](double a, double b) { return (curve.position(b) - curve.position(a)).norm(); };
  const double dl_ds = (chord_length(s + h, s_prime) - chord_length(s - h, s_prime)) / (2.0 * h);
  const double dl_dsp = (chord_length(s, s_prime + h) - chord_length(s, s_prime - h)) / (2.0 * h);

  const Vec2 chord = curve.position(s_prime) - curve.position(s);
  const double xi = chord.dot(curve.tangent(s)) / chord.norm();
  const Bounce b = billiard_map(curve, {s, xi}, 0.0);
  if (std::abs(wrap_centered(b.next.s - s_prime, L)) > 1e-8 * L) {
    throw Error(ErrorCode::NoTransversalHit, "chord is not interior: the map lands elsewhere");
  }
  return {dl_ds + xi, dl_dsp - b.next.xi};
}

void write_orbit_csv(std::ostream& out, const BoundaryCurve& curve, const Orbit& orb) {
  out << "bounce_index,s,xi,chord_length,x,y\n";
  for (std::size_t i = 0; i < orb.chords.size(); ++i) {
    const PhasePoint& p = orb.states[i];
    const Vec2 pos = curve.position(p.s);
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, p.s, p.xi,
                       orb.chords[i].length, pos.x, pos.y);
  }
}

namespace {

// ∫_0^ℓ V along the segment, Gauss-Legendre with panel bisection.
double segment_integral(const std::function<double(Vec2)>& V, Vec2 a, Vec2 b, int depth = 0) {
  const double len = (b - a).norm();
  auto along = [&](Vec2 p, Vec2 q) {
    const Vec2 dir = q - p;
    return gauss_legendre([&](double t) { return V(p + t * dir); }, 0.0, 1.0) * dir.norm();
  };
  const Vec2 mid = 0.5 * (a + b);
  const double whole = along(a, b), halves = along(a, mid) + along(mid, b);
  if (std::abs(whole - halves) <= 1e-12 * std::max(1.0, std::abs(halves)) + 1e-15 * len) return halves;
  if (depth >= 12) throw Error(ErrorCode::QuadratureFailure, "chord integral did not settle");
  return segment_integral(V, a, mid, depth + 1) + segment_integral(V, mid, b, depth + 1);
}

}  // namespace

FlowoutResult flowout_integral(const BoundaryCurve& curve, const InvariantCircle& circle,
                               const std::function<double(Vec2)>& V, int nodes) {
  require(nodes >= 8, ErrorCode::InvalidArgument, "flow-out needs at least 8 nodes");
  // every chord of one period contributes; μ is the probability measure dφ/2π
  auto evaluate = [&](int n) {
    FlowoutResult r;
    r.nodes = n;
    for (const auto& [p, w] : circle.measure(n)) {
      PhasePoint cur = p;
      for (int j = 0; j < circle.period; ++j) {
        const auto hop = billiard_map(curve, cur);
        r.volume += w * hop.chord.length;
        r.value += w * segment_integral(V, curve.position(cur.s), curve.position(hop.next.s));
        cur = hop.next;
      }
    }
    return r;
  };
  auto prev = evaluate(nodes);
  for (int k = 0; k < 4; ++k) {
    auto next = evaluate(2 * prev.nodes);
    const double scale = std::max({1.0, std::abs(next.value), std::abs(next.volume)});
    if (std::abs(next.value - prev.value) <= 1e-10 * scale && std::abs(next.volume - prev.volume) <= 1e-10 * scale) {
      return next;
    }
    prev = next;
  }
  throw Error(ErrorCode::QuadratureFailure, fmt::format("flow-out integral unsettled at {} nodes", prev.nodes));
}

}  // namespace billiards
