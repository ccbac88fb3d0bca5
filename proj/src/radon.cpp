#include "billiards/radon.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "billiards/errors.hpp"

namespace billiards {

BoundaryFunction trig_boundary_function(const BoundaryCurve& curve, std::vector<TrigTerm> terms, bool in_x) {
  auto series = [terms](double theta) {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.amp * (t.cosine ? std::cos(t.n * theta) : std::sin(t.n * theta));
    return acc;
  };
  BoundaryFunction K;
  const double L = curve.total_length();
  if (in_x) {
    K.of_s = [series, curve](double s) { return series(curve.param_at(s)); };
    K.of_x = series;
  } else {
    K.of_s = [series, L](double s) { return series(kTwoPi * s / L); };
  }
  return K;
}

BoundaryFunction parse_boundary_function(const BoundaryCurve& curve, const nlohmann::json& spec) {
  require(spec.is_object(), ErrorCode::ConfigError, "K spec must be an object");
  for (const auto& [key, _] : spec.items()) {
    require(key == "variable" || key == "terms", ErrorCode::ConfigError, "unknown K key \"" + key + "\"");
  }
  const std::string var = spec.value("variable", "s");
  require(var == "x" || var == "s", ErrorCode::ConfigError, "K variable must be \"x\" or \"s\"");
  require(spec.contains("terms") && spec["terms"].is_array(), ErrorCode::ConfigError, "K needs a terms array");
  std::vector<TrigTerm> terms;
  for (const auto& t : spec["terms"]) {
    require(t.is_object(), ErrorCode::ConfigError, "K term must be an object");
    for (const auto& [key, _] : t.items()) {
      require(key == "kind" || key == "n" || key == "amp", ErrorCode::ConfigError,
              "unknown K term key \"" + key + "\"");
    }
    const std::string kind = t.value("kind", "cos");
    require(kind == "cos" || kind == "sin", ErrorCode::ConfigError, "K term kind must be cos or sin");
    require(t.contains("n") && t["n"].is_number_integer() && t["n"].get<int>() >= 0, ErrorCode::ConfigError,
            "K term needs a nonnegative integer n");
    require(t.contains("amp") && t["amp"].is_number(), ErrorCode::ConfigError, "K term needs a numeric amp");
    terms.push_back({kind == "cos", t["n"].get<int>(), t["amp"].get<double>()});
  }
  return trig_boundary_function(curve, std::move(terms), var == "x");
}

double SymmetryGroup::act(int element, double s) const {
  switch (element) {
    case 0: return wrap(s, length_);
    case 1: return wrap(-s, length_);
    case 2: return wrap(0.5 * length_ - s, length_);
    case 3: return wrap(s + 0.5 * length_, length_);
  }
  throw Error(ErrorCode::InvalidArgument, "symmetry element out of range");
}

PhasePoint SymmetryGroup::act(int element, PhasePoint p) const {
  const bool reflection = element == 1 || element == 2;
  return {act(element, p.s), reflection ? -p.xi : p.xi};
}

BoundaryFunction symmetry_average(const BoundaryFunction& K, const SymmetryGroup& G) {
  BoundaryFunction out;
  out.smoothness = K.smoothness;
  out.of_s = [K, G](double s) {
    double acc = 0.0;
    for (int g = 0; g < SymmetryGroup::size(); ++g) acc += K.of_s(G.act(g, s));
    return acc / SymmetryGroup::size();
  };
  return out;
}

namespace {

double trapezoid_sum(const std::vector<InvariantCircle>& circles, const BoundaryFunction& K, int n,
                     double glance_eps) {
  double total = 0.0;
  for (std::size_t j = 0; j < circles.size(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const PhasePoint p = circles[j].at(kTwoPi * i / n);
      const double sin_theta = std::sqrt(std::max(0.0, 1.0 - p.xi * p.xi));
      if (sin_theta < glance_eps) {
        throw Error(ErrorCode::GlancingCircle, fmt::format("sin(theta)={:.3g} on circle", sin_theta),
                    static_cast<long>(j));
      }
      acc += K.of_s(p.s) / sin_theta;
    }
    total += acc / n;
  }
  return total;
}

}  // namespace

InvariantValue torus_invariant(const std::vector<InvariantCircle>& circles, const BoundaryFunction& K,
                               const QuadratureOptions& options) {
  require(!circles.empty(), ErrorCode::InvalidArgument, "no circles");
  int n = options.initial_nodes;
  double prev = trapezoid_sum(circles, K, n, options.glance_eps);
  while (true) {
    const int next = 2 * n;
    const double cur = trapezoid_sum(circles, K, next, options.glance_eps);
    const double diff = std::abs(cur - prev);
    if (diff < options.tol || next >= options.max_nodes) {
      if (diff >= options.tol) {
        throw Error(ErrorCode::QuadratureFailure, fmt::format("no convergence at {} nodes (diff {:.3g})", next, diff));
      }
      return {cur, next, diff};
    }
    prev = cur;
    n = next;
  }
}

namespace {

// ∫_lo^hi g(x) dx, composite 30-point Gauss–Legendre, panels doubled to convergence.
double composite_gl(const std::function<double(double)>& g, double lo, double hi) {
  auto run = [&](int panels) {
    double acc = 0.0;
    const double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) acc += gauss_legendre(g, lo + p * w, lo + (p + 1) * w);
    return acc;
  };
  double prev = run(2);
  for (int panels = 4; panels <= 1024; panels *= 2) {
    const double cur = run(panels);
    if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureFailure, "Gauss-Legendre panels did not converge");
}

// ∫ g(x)/√(f(x) − h) dx over a component [x1, x2] of {f > h} with simple zeros
// of f − h at both ends. x = (x1 + x2)/2 − r cos u removes both inverse square
// roots; each half is written from its own endpoint to keep x − x_i exact.
double component_integral(const LiouvilleTable& t, const std::function<double(double)>& g, double h, double x1,
                          double x2) {
  const double r = 0.5 * (x2 - x1);
  // f − h near an endpoint from the Taylor jet there. The endpoint is taken as
  // an exact zero: the root residual f(xe) − h would otherwise dominate as u → 0.
  auto gap_near = [&](double xe, double dx) {
    double acc = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 30; ++k) {
      term *= dx / k;
      const double add = t.f(k, xe) * term;
      acc += add;
      if (k > 2 && std::abs(add) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
  };
  auto integrand = [&](double u) {
    const bool left = u < 0.5 * kPi;
    const double dx = left ? 2.0 * r * std::pow(std::sin(0.5 * u), 2) : -2.0 * r * std::pow(std::cos(0.5 * u), 2);
    const double x = (left ? x1 : x2) + dx;
    const double gap = std::abs(dx) < 0.05 ? gap_near(left ? x1 : x2, dx) : t.f(0, x) - h;
    if (gap <= 0.0) return 0.0;
    return g(x) * r * std::sin(u) / std::sqrt(gap);
  };
  return composite_gl(integrand, 0.0, kPi);
}

double periodic_integral(const std::function<double(double)>& g) {
  // smooth periodic integrand: trapezoid converges geometrically
  auto run = [&](int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g(kTwoPi * i / n);
    return acc * kTwoPi / n;
  };
  double prev = run(256);
  for (int n = 512; n <= (1 << 20); n *= 2) {
    const double cur = run(n);
    if (std::abs(cur - prev) <= 1e-14 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureFailure, "periodic trapezoid did not converge");
}

struct BranchGeometry {
  LiouvilleBranch branch;
  double x1 = 0.0;  // left end of the upper component on the two-bounce branch
};

BranchGeometry classify(const LiouvilleTable& t, double h) {
  const double qN = t.qN();
  const double fmax = t.f(0, 0.5 * kPi);
  if (h > qN && h < 0.0) return {LiouvilleBranch::Rotational};
  if (h > 0.0 && h < fmax) {
    const double x1 = find_root([&](double x) { return t.f(0, x) - h; }, 0.0, 0.5 * kPi);
    return {LiouvilleBranch::TwoBounce, x1};
  }
  throw Error(ErrorCode::HOutOfRange,
              fmt::format("h={:.17g} outside ({:.17g}, 0) and (0, {:.17g})", h, qN, fmax));
}

}  // namespace

LiouvilleRadon liouville_radon(const LiouvilleTable& table, const std::function<double(double)>& Kx, double h) {
  const auto geom = classify(table, h);
  const double qN = table.qN();
  const double pre = 1.0 / std::sqrt(h - qN);
  auto weight = [&](double x) { return Kx(x) * std::sqrt(table.f(0, x) - qN); };
  LiouvilleRadon out;
  out.branch = geom.branch;
  out.leray_mass = leray_mass(table, h);
  if (geom.branch == LiouvilleBranch::Rotational) {
    const double v = pre * periodic_integral([&](double x) { return weight(x) / std::sqrt(table.f(0, x) - h); });
    out.R_plus = v;
    out.R_minus = -v;
  } else {
    const double x1 = geom.x1;
    // ξ takes both signs over the x-interval of a two-bounce circle
    out.R_plus = 2.0 * pre * component_integral(table, weight, h, x1, kPi - x1);
    out.R_minus = -2.0 * pre * component_integral(table, weight, h, kPi + x1, kTwoPi - x1);
  }
  return out;
}

double leray_mass(const LiouvilleTable& table, double h) {
  const auto geom = classify(table, h);
  if (geom.branch == LiouvilleBranch::Rotational) {
    return periodic_integral([&](double x) { return 1.0 / std::sqrt(table.f(0, x) - h); });
  }
  return 2.0 * component_integral(table, [](double) { return 1.0; }, h, geom.x1, kPi - geom.x1);
}

namespace {

// One-sided discrete Hausdorff distance from sampled g(Λa) to the polyline of Λb.
double one_sided(const InvariantCircle& a, const InvariantCircle& b, const SymmetryGroup& G, int element,
                 bool transform_a) {
  constexpr int kCoarse = 256;
  constexpr int kFine = 4096;
  const double L = G.length();
  std::vector<PhasePoint> poly(kFine);
  for (int i = 0; i < kFine; ++i) {
    const PhasePoint p = b.at(kTwoPi * i / kFine);
    poly[i] = transform_a ? p : G.act(element, p);
  }
  double worst = 0.0;
  for (int i = 0; i < kCoarse; ++i) {
    PhasePoint q = a.at(kTwoPi * i / kCoarse);
    if (transform_a) q = G.act(element, q);
    double best = 1e300;
    for (int j = 0; j < kFine; ++j) {
      const PhasePoint& p0 = poly[j];
      const PhasePoint& p1 = poly[(j + 1) % kFine];
      const Vec2 a0{wrap_centered(p0.s - q.s, L), p0.xi - q.xi};
      const Vec2 a1{wrap_centered(p1.s - q.s, L), p1.xi - q.xi};
      const Vec2 d = a1 - a0;
      const double dd = d.dot(d);
      const double t = dd > 0.0 ? std::clamp(-a0.dot(d) / dd, 0.0, 1.0) : 0.0;
      best = std::min(best, (a0 + d * t).norm());
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

BouncingBallCheck bouncing_ball_identity_check(const InvariantCircle& lambda1, const InvariantCircle& lambda2,
                                               const BoundaryFunction& K, const SymmetryGroup& G,
                                               double hausdorff_tol) {
  BouncingBallCheck out;
  out.hausdorff = 1e300;
  for (int g = 1; g < SymmetryGroup::size(); ++g) {
    // the group elements are involutions, so g(Λ1) = Λ2 iff Λ1 = g(Λ2)
    const double d = std::max(one_sided(lambda1, lambda2, G, g, true), one_sided(lambda2, lambda1, G, g, false));
    if (d < out.hausdorff) {
      out.hausdorff = d;
      out.exchanging_element = g;
    }
  }
  if (out.hausdorff > hausdorff_tol) {
    throw Error(ErrorCode::SymmetryMismatch,
                fmt::format("no symmetry exchanges the circles (Hausdorff {:.3g})", out.hausdorff));
  }
  const auto Ksharp = symmetry_average(K, G);
  out.lhs = torus_invariant({lambda1}, Ksharp).value;
  out.rhs = 0.5 * (torus_invariant({lambda1}, K).value + torus_invariant({lambda2}, K).value);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

void write_invariant_csv_header(std::ostream& out) {
  out << "h_or_omega,invariant_value,quadrature_nodes,est_error\n";
}

void write_invariant_csv_row(std::ostream& out, double h_or_omega, const InvariantValue& v) {
  out << fmt::format("{:.17g},{:.17g},{},{:.17g}\n", h_or_omega, v.value, v.nodes, v.est_error);
}

}  // namespace billiards
