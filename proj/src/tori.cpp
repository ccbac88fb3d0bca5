#include "billiards/tori.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

using cd = std::complex<double>;

// Two-sided coefficients ĝ_{-K..K} of a real series stored as c_k, k ≥ 0.
std::vector<cd> two_sided(const std::vector<cd>& c) {
  const int K = static_cast<int>(c.size()) - 1;
  std::vector<cd> out(2 * K + 1);
  out[K] = c[0].real();
  for (int k = 1; k <= K; ++k) {
    out[K + k] = c[k];
    out[K - k] = std::conj(c[k]);
  }
  return out;
}

std::vector<cd> convolve(const std::vector<cd>& a, const std::vector<cd>& b) {
  std::vector<cd> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// ∫_lo^hi of the two-sided series centered at index K.
double integrate_series(const std::vector<cd>& g, double lo, double hi) {
  const int K = static_cast<int>(g.size() - 1) / 2;
  double acc = g[K].real() * (hi - lo);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const cd ik(0.0, k);
    acc += (g[K + k] * (std::exp(ik * hi) - std::exp(ik * lo)) / ik).real();
  }
  return acc;
}

double weighted_rotation(const std::vector<double>& inc) {
  return weighted_average(inc, birkhoff_weights(inc.size()));
}

// Order-based estimate: |x_n − x_0 − nω| < 1 for every n; intersect the intervals.
double order_based_rotation(const std::vector<double>& inc, double* width) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double x = 0.0;
  for (std::size_t n = 1; n <= inc.size(); ++n) {
    x += inc[n - 1];
    const double dn = static_cast<double>(n);
    lo = std::max(lo, (x - 1.0) / dn);
    hi = std::min(hi, (x + 1.0) / dn);
  }
  *width = 0.5 * (hi - lo);
  return 0.5 * (lo + hi);
}

}  // namespace

RotationData rotation_number(const std::vector<PhasePoint>& orbit, double lift,
                             const RotationOptions& options) {
  if (orbit.size() < 1000) {
    throw Error(ErrorCode::OrbitTooShort, fmt::format("{} states, need at least 1000", orbit.size()));
  }
  require(lift > 0.0, ErrorCode::InvalidArgument, "lift must be positive");
  if (options.conserved) {
    const double g0 = options.conserved(orbit.front());
    for (std::size_t j = 1; j < orbit.size(); ++j) {
      const double drift = std::abs(options.conserved(orbit[j]) - g0);
      if (drift > options.conserved_tol) {
        throw Error(ErrorCode::NonCircleOrbit, fmt::format("conserved quantity drifts by {:.3g}", drift),
                    static_cast<long>(j));
      }
    }
  }
  std::vector<double> inc(orbit.size() - 1);
  for (std::size_t j = 0; j + 1 < orbit.size(); ++j) inc[j] = wrap(orbit[j + 1].s - orbit[j].s, lift) / lift;

  const std::size_t half = inc.size() / 2;
  const double full = weighted_rotation(inc);
  const double first = weighted_rotation({inc.begin(), inc.begin() + half});
  const double second = weighted_rotation({inc.begin() + half, inc.end()});
  const double spread = std::abs(first - second);

  RotationData out;
  if (spread > options.fallback_threshold) {
    double width = 0.0;
    out.omega = order_based_rotation(inc, &width);
    out.error_estimate = width;
    out.method = RotationMethod::OrderBased;
  } else {
    out.omega = full;
    // rounding accumulated along the orbit floors what the spread can certify
    out.error_estimate = spread + 1e-12;
    out.method = RotationMethod::WeightedAverage;
  }
  return out;
}

DiophantineWitness diophantine_kappa(const std::vector<double>& omega, double tau, int k_max) {
  require(!omega.empty(), ErrorCode::InvalidArgument, "empty frequency vector");
  require(k_max >= 1, ErrorCode::InvalidArgument, "k_max must be >= 1");
  require(tau > static_cast<double>(omega.size()) - 1.0, ErrorCode::InvalidArgument, "tau must exceed n-1");
  const int d = static_cast<int>(omega.size());
  DiophantineWitness best;
  best.tau = tau;
  best.k_max = k_max;
  best.kappa_hat = std::numeric_limits<double>::infinity();
  std::vector<int> k(d, 0);

  auto visit = [&]() {
    long double dot = 0.0L;
    long double magnitude = 0.0L;
    int norm = 0;
    for (int i = 0; i < d; ++i) {
      const long double term = static_cast<long double>(k[i]) * static_cast<long double>(omega[i]);
      dot += term;
      magnitude += std::fabs(term);
      norm += std::abs(k[i]);
    }
    if (norm == 0) return;
    const long double nearest = std::nearbyint(dot);
    long double gap = std::fabs(dot - nearest);
    // inputs are doubles: gaps at their representation level count as exact resonance
    if (gap <= 4.0L * std::numeric_limits<double>::epsilon() * std::max(1.0L, magnitude)) gap = 0.0L;
    const double value = static_cast<double>(gap) * std::pow(norm, tau);
    if (value < best.kappa_hat) {
      best.kappa_hat = value;
      best.argmin_k = k;
      best.argmin_kn = -static_cast<long>(nearest);
    }
  };
  // k and −k give the same value; keep the first nonzero entry positive.
  auto rec = [&](auto&& self, int i, int budget, bool leading) -> void {
    if (i == d) {
      visit();
      return;
    }
    const int lo = leading ? 0 : -budget;
    for (int v = lo; v <= budget; ++v) {
      k[i] = v;
      self(self, i + 1, budget - std::abs(v), leading && v == 0);
    }
    k[i] = 0;
  };
  rec(rec, 0, k_max, true);
  return best;
}

double InvariantCircle::s_lift(double phi) const {
  const double base = rotational ? length * phi / kTwoPi : 0.0;
  return base + eval_real_series(s_coeffs, phi);
}

double InvariantCircle::ds_dphi(double phi) const {
  const double base = rotational ? length / kTwoPi : 0.0;
  return base + eval_real_series_derivative(s_coeffs, phi);
}

PhasePoint InvariantCircle::at(double phi) const {
  return {wrap(s_lift(phi), length), eval_real_series(xi_coeffs, phi)};
}

std::vector<std::pair<PhasePoint, double>> InvariantCircle::measure(int nodes) const {
  std::vector<std::pair<PhasePoint, double>> out;
  out.reserve(nodes);
  for (int i = 0; i < nodes; ++i) out.emplace_back(at(kTwoPi * i / nodes), 1.0 / nodes);
  return out;
}

namespace {

struct FitAttempt {
  InvariantCircle circle;
  bool ok = false;
};

FitAttempt fit_circle(const BoundaryCurve& curve, PhasePoint seed, int n_modes, const CircleOptions& opt,
                      int samples) {
  const double L = curve.total_length();
  const bool rotational = !opt.center.has_value();
  std::vector<PhasePoint> states(samples);
  states[0] = seed;
  for (int j = 1; j < samples; ++j) {
    try {
      states[j] = billiard_map_power(curve, states[j - 1], opt.period).next;
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), static_cast<long>(j) * opt.period);
    }
  }

  // Lifted angle samples, in turns, and the periodic parts to be fitted.
  std::vector<double> inc(samples - 1);
  std::vector<double> s_part(samples), xi_part(samples);
  if (rotational) {
    for (int j = 0; j + 1 < samples; ++j) inc[j] = wrap(states[j + 1].s - states[j].s, L) / L;
  } else {
    const PhasePoint c = *opt.center;
    const double scale = kTwoPi / L;
    auto angle = [&](PhasePoint p) { return std::atan2(p.xi - c.xi, scale * wrap_centered(p.s - c.s, L)); };
    for (int j = 0; j + 1 < samples; ++j) {
      inc[j] = wrap_centered(angle(states[j + 1]) - angle(states[j]), kTwoPi) / kTwoPi;
    }
  }
  const double advance = weighted_rotation(inc);
  const auto half = inc.size() / 2;
  const double spread = std::abs(weighted_rotation({inc.begin(), inc.begin() + half}) -
                                 weighted_rotation({inc.begin() + half, inc.end()}));

  const double reduced = wrap(advance, 1.0);
  const auto witness = diophantine_kappa({reduced}, 1.0, opt.resonance_kmax);
  if (witness.kappa_hat <= opt.resonance_tol) {
    throw Error(ErrorCode::ResonantRotation,
                fmt::format("rotation {:.17g} resonant at k={}", reduced, witness.argmin_k.at(0)));
  }

  double s_lift = seed.s;
  for (int j = 0; j < samples; ++j) {
    const double phi = kTwoPi * advance * j;
    if (rotational) {
      if (j > 0) s_lift += inc[j - 1] * L;
      s_part[j] = s_lift - L * phi / kTwoPi;
    } else {
      s_part[j] = opt.center->s + wrap_centered(states[j].s - opt.center->s, L);
    }
    xi_part[j] = states[j].xi;
  }

  const auto w = birkhoff_weights(samples);
  std::vector<cd> s_coeffs(n_modes + 1), xi_coeffs(n_modes + 1);
  for (int j = 0; j < samples; ++j) {
    const cd step = std::polar(1.0, -kTwoPi * wrap(advance * j, 1.0));
    cd e = 1.0;
    for (int k = 0; k <= n_modes; ++k) {
      s_coeffs[k] += w[j] * s_part[j] * e;
      xi_coeffs[k] += w[j] * xi_part[j] * e;
      e *= step;
    }
  }

  FitAttempt out;
  InvariantCircle& circ = out.circle;
  circ.omega = {-advance, spread + 1e-12, RotationMethod::WeightedAverage};
  circ.period = opt.period;
  circ.rotational = rotational;
  circ.length = L;
  circ.s_coeffs = std::move(s_coeffs);
  circ.xi_coeffs = std::move(xi_coeffs);
  circ.orbit_samples = samples;

  double residual = 0.0;
  for (int i = 0; i < opt.residual_grid; ++i) {
    const double phi = kTwoPi * i / opt.residual_grid;
    const PhasePoint img = billiard_map_power(curve, circ.at(phi), opt.period).next;
    const PhasePoint tgt = circ.at(phi + kTwoPi * advance);
    residual = std::max({residual, std::abs(wrap_centered(img.s - tgt.s, L)), std::abs(img.xi - tgt.xi)});
  }
  circ.residual = residual;
  out.ok = residual < opt.tol;
  return out;
}

}  // namespace

InvariantCircle circle_conjugacy(const BoundaryCurve& curve, PhasePoint seed, int n_modes,
                                 const CircleOptions& options) {
  require(n_modes >= 1, ErrorCode::InvalidArgument, "n_modes must be >= 1");
  require(options.period >= 1, ErrorCode::InvalidArgument, "period must be >= 1");
  require(options.orbit_length >= 1000, ErrorCode::OrbitTooShort, "orbit_length must be >= 1000");
  require(options.center.has_value() || options.period == 1, ErrorCode::InvalidArgument,
          "rotational circles are fitted for the map itself (period 1)");
  double last = 0.0;
  for (int r = 0; r <= options.max_refinements; ++r) {
    auto attempt = fit_circle(curve, seed, n_modes, options, options.orbit_length << r);
    if (attempt.ok) return attempt.circle;
    last = attempt.circle.residual;
  }
  throw Error(ErrorCode::FitDiverged, fmt::format("conjugacy residual {:.3g} above {:.3g}", last, options.tol));
}

InvariantCircle exact_disk_circle(const BoundaryCurve& disk, double xi, double s0) {
  require(disk.kind() == BoundaryCurve::Kind::Circle, ErrorCode::Unsupported, "closed form needs a disk");
  require(std::abs(xi) < 1.0, ErrorCode::GlancingRay, "|xi| must be below 1");
  InvariantCircle c;
  c.omega = {-std::acos(xi) / kPi, 0.0, RotationMethod::ClosedForm};
  c.length = disk.total_length();
  c.s_coeffs = {s0};
  c.xi_coeffs = {xi};
  return c;
}

InvariantCircle mapped_circle(const BoundaryCurve& curve, const InvariantCircle& circle, int grid) {
  const int K = static_cast<int>(circle.s_coeffs.size()) - 1;
  require(grid > 2 * K, ErrorCode::InvalidArgument, "grid too coarse for the circle's modes");
  InvariantCircle out = circle;
  out.s_coeffs.assign(K + 1, 0.0);
  out.xi_coeffs.assign(K + 1, 0.0);
  const double L = circle.length;
  const PhasePoint ref = billiard_map(curve, circle.at(0.0)).next;
  for (int i = 0; i < grid; ++i) {
    const double phi = kTwoPi * i / grid;
    const PhasePoint p = billiard_map(curve, circle.at(phi)).next;
    double s;
    if (circle.rotational) {
      // a chord advances the lift by less than one turn
      const double from = circle.s_lift(phi);
      s = from + wrap(p.s - from, L) - L * phi / kTwoPi;
    } else {
      s = ref.s + wrap_centered(p.s - ref.s, L);
    }
    const cd step = std::polar(1.0, -phi);
    cd e = 1.0;
    for (int k = 0; k <= K; ++k) {
      out.s_coeffs[k] += s * e / static_cast<double>(grid);
      out.xi_coeffs[k] += p.xi * e / static_cast<double>(grid);
      e *= step;
    }
  }
  return out;
}

namespace {

struct LoopIntegrals {
  double I0 = 0.0;
  double L0 = 0.0;
  double A_avg = 0.0;
};

LoopIntegrals loop_integrals(const BoundaryCurve& curve, const InvariantCircle& circle, int nodes) {
  auto xi = two_sided(circle.xi_coeffs);
  auto ds = two_sided(circle.s_coeffs);
  const int K = static_cast<int>(circle.s_coeffs.size()) - 1;
  for (int k = -K; k <= K; ++k) ds[K + k] *= cd(0.0, k);
  if (circle.rotational) ds[K] += circle.length / kTwoPi;
  const auto integrand = convolve(xi, ds);  // ξ ds/dφ

  LoopIntegrals out;
  out.I0 = integrand[integrand.size() / 2].real();
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    acc += billiard_map_power(curve, circle.at(kTwoPi * i / nodes), circle.period).chord.action;
  }
  out.A_avg = acc / nodes;
  // Generating function along the circle: L = A(F(0)) − ∫_0^{2πα} ξ ds.
  const double a0 = billiard_map_power(curve, circle.at(0.0), circle.period).chord.action;
  out.L0 = a0 - integrate_series(integrand, 0.0, kTwoPi * circle.advance());
  return out;
}

}  // namespace

ActionData action_data(const BoundaryCurve& curve, const InvariantCircle& circle, const CircleFamily* family,
                       int nodes) {
  require(nodes >= 16, ErrorCode::InvalidArgument, "too few quadrature nodes");
  const auto li = loop_integrals(curve, circle, nodes);
  ActionData out;
  out.I0 = li.I0;
  out.A_avg = li.A_avg;
  out.L0 = li.L0;
  out.gradL = kTwoPi * circle.omega.omega;
  out.identity_residual = out.L0 - out.I0 * out.gradL - out.A_avg;
  if (family == nullptr) return out;

  const double scale = circle.rotational ? circle.length / kTwoPi - std::abs(out.I0) : std::abs(out.I0);
  const double delta = 1e-3 * scale;
  require(delta > 0.0, ErrorCode::InvalidArgument, "degenerate action scale");

  struct Sample {
    double I;
    double grad;
  };
  auto sample_at = [&](double p) {
    const auto c = circle_conjugacy(curve, family->seed(p), family->n_modes, family->options);
    return Sample{loop_integrals(curve, c, nodes).I0, kTwoPi * c.omega.omega};
  };
  auto solve = [&](double target) {
    double p0 = family->param;
    double i0 = out.I0;
    double p1 = family->param + (target > out.I0 ? family->dparam : -family->dparam);
    Sample s1 = sample_at(p1);
    for (int it = 0; it < 12 && std::abs(s1.I - target) > 1e-3 * delta; ++it) {
      require(s1.I != i0, ErrorCode::FitDiverged, "flat action along the family");
      const double p2 = p1 + (target - s1.I) * (p1 - p0) / (s1.I - i0);
      p0 = p1;
      i0 = s1.I;
      p1 = p2;
      s1 = sample_at(p1);
    }
    return s1;
  };
  const Sample lo = solve(out.I0 - delta);
  const Sample hi = solve(out.I0 + delta);
  // Derivative at I0 of the quadratic through the three samples.
  const double x0 = lo.I, x1 = out.I0, x2 = hi.I;
  const double y0 = lo.grad, y1 = out.gradL, y2 = hi.grad;
  out.hessL = y0 * (x1 - x2) / ((x0 - x1) * (x0 - x2)) +
              y1 * (2 * x1 - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
              y2 * (x1 - x0) / ((x2 - x0) * (x2 - x1));
  return out;
}

bool has_low_order_resonance(const std::vector<double>& alpha, int order, double tol) {
  if (alpha.empty()) return false;
  return diophantine_kappa(alpha, static_cast<double>(alpha.size()), order).kappa_hat <= tol;
}

FixedPointData elliptic_fixed_point_data(const BoundaryCurve& curve, const std::vector<PhasePoint>& periodic_orbit) {
  require(!periodic_orbit.empty(), ErrorCode::InvalidArgument, "empty orbit");
  const int m = static_cast<int>(periodic_orbit.size());
  const double L = curve.total_length();
  const PhasePoint x0 = periodic_orbit.front();
  auto Pm = [&](PhasePoint p) { return billiard_map_power(curve, p, m, 0.0).next; };
  const PhasePoint back = Pm(x0);
  const double miss = std::max(std::abs(wrap_centered(back.s - x0.s, L)), std::abs(back.xi - x0.xi));
  if (miss > 1e-10) throw Error(ErrorCode::NonPeriodicOrbit, fmt::format("return defect {:.3g}", miss));

  constexpr double h = 1e-6;
  Eigen::Matrix2d J;
  const auto sp = Pm({x0.s + h, x0.xi}), sm = Pm({x0.s - h, x0.xi});
  const auto xp = Pm({x0.s, x0.xi + h}), xm = Pm({x0.s, x0.xi - h});
  J << wrap_centered(sp.s - sm.s, L) / (2 * h), wrap_centered(xp.s - xm.s, L) / (2 * h),
      (sp.xi - sm.xi) / (2 * h), (xp.xi - xm.xi) / (2 * h);

  FixedPointData out;
  out.trace = J.trace();
  out.determinant = J.determinant();
  constexpr double kParabolicBand = 1e-6;
  if (std::abs(out.trace) > 2.0 + kParabolicBand) {
    throw Error(ErrorCode::HyperbolicPoint, fmt::format("trace {:.17g}", out.trace));
  }
  out.elliptic = std::abs(out.trace) < 2.0 - kParabolicBand;
  out.alpha = {std::acos(std::clamp(0.5 * out.trace, -1.0, 1.0)) / kTwoPi};
  out.resonant_order4 = !out.elliptic || has_low_order_resonance(out.alpha, 4, 1e-8);
  return out;
}

double ellipse_first_integral(const BoundaryCurve& curve, PhasePoint p) {
  const auto axes = curve.semi_axes();
  require(axes.has_value(), ErrorCode::Unsupported, "first integral needs a circle or an ellipse");
  const auto [a, b] = *axes;
  const double c2 = a * a - b * b;
  const double st = std::sin(curve.param_at(p.s));
  return c2 * st * st - p.xi * p.xi * (c2 * st * st + b * b);
}

void write_circle_csv(std::ostream& out, const BoundaryCurve& curve, const InvariantCircle& circle, int nodes) {
  out << "phi,s,xi,chord_length\n";
  for (int i = 0; i < nodes; ++i) {
    const double phi = kTwoPi * i / nodes;
    const PhasePoint p = circle.at(phi);
    const double len = billiard_map_power(curve, p, circle.period).chord.length;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", phi, p.s, p.xi, len);
  }
}

namespace {
const char* method_name(RotationMethod m) {
  switch (m) {
    case RotationMethod::WeightedAverage: return "weighted-average";
    case RotationMethod::OrderBased: return "order-based";
    case RotationMethod::ClosedForm: return "closed-form";
  }
  return "unknown";
}
}  // namespace

nlohmann::json to_json(const RotationData& data) {
  return {{"omega", data.omega}, {"error_estimate", data.error_estimate}, {"method", method_name(data.method)}};
}

nlohmann::json to_json(const ActionData& data) {
  nlohmann::json j = {{"I0", data.I0},       {"L0", data.L0},       {"gradL", data.gradL},
                      {"A_avg", data.A_avg}, {"identity_residual", data.identity_residual}};
  j["hessL"] = data.hessL ? nlohmann::json(*data.hessL) : nlohmann::json(nullptr);
  return j;
}

}  // namespace billiards
