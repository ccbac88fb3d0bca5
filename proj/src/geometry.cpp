#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

constexpr int kArclengthCells = 4096;

// d^n/dz^n cos z
double cos_derivative(int n, double z) { return std::cos(z + 0.5 * kPi * n); }

}  // namespace

struct BoundaryCurve::Impl {
  Kind kind = Kind::Circle;
  double a = 1.0;  // circle radius or ellipse semi-major axis
  double b = 1.0;
  std::vector<double> coeffs;  // Fourier radial coefficients
  double length = kTwoPi;
  // Cumulative arclength at t_i = i·2π/cells, i = 0..cells (non-circle kinds).
  std::vector<double> cumulative;

  double radius(int order, double t) const {
    double r = order == 0 ? coeffs[0] : 0.0;
    const std::size_t modes = (coeffs.size() - 1) / 2;
    for (std::size_t k = 1; k <= modes; ++k) {
      const double kd = static_cast<double>(k);
      const double scale = std::pow(kd, order);
      r += scale * (coeffs[2 * k - 1] * cos_derivative(order, kd * t) +
                    coeffs[2 * k] * cos_derivative(order, kd * t - 0.5 * kPi));
    }
    return r;
  }

  Vec2 point(double t) const {
    switch (kind) {
      case Kind::Circle: return {a * std::cos(t), a * std::sin(t)};
      case Kind::Ellipse: return {a * std::cos(t), b * std::sin(t)};
      case Kind::Fourier: {
        const double r = radius(0, t);
        return {r * std::cos(t), r * std::sin(t)};
      }
    }
    return {};
  }

  Vec2 velocity(double t) const {
    switch (kind) {
      case Kind::Circle: return {-a * std::sin(t), a * std::cos(t)};
      case Kind::Ellipse: return {-a * std::sin(t), b * std::cos(t)};
      case Kind::Fourier: {
        const double r = radius(0, t);
        const double dr = radius(1, t);
        return {dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
      }
    }
    return {};
  }

  Vec2 acceleration(double t) const {
    switch (kind) {
      case Kind::Circle: return {-a * std::cos(t), -a * std::sin(t)};
      case Kind::Ellipse: return {-a * std::cos(t), -b * std::sin(t)};
      case Kind::Fourier: {
        const double r = radius(0, t);
        const double dr = radius(1, t);
        const double d2r = radius(2, t);
        return {d2r * std::cos(t) - 2.0 * dr * std::sin(t) - r * std::cos(t),
                d2r * std::sin(t) + 2.0 * dr * std::cos(t) - r * std::sin(t)};
      }
    }
    return {};
  }

  double speed(double t) const { return velocity(t).norm(); }

  double cell_width() const { return kTwoPi / kArclengthCells; }

  double segment(double t0, double t1) const {
    return boost::math::quadrature::gauss<double, 10>::integrate(
        [this](double t) { return speed(t); }, t0, t1);
  }

  void build_table() {
    cumulative.assign(kArclengthCells + 1, 0.0);
    const double h = cell_width();
    for (int i = 0; i < kArclengthCells; ++i) {
      cumulative[i + 1] = cumulative[i] + segment(i * h, (i + 1) * h);
    }
    length = cumulative.back();
  }

  double arclength(double t) const {
    if (kind == Kind::Circle) return a * t;
    const double turns = std::floor(t / kTwoPi);
    const double tr = t - turns * kTwoPi;
    const double h = cell_width();
    const int i = std::clamp(static_cast<int>(tr / h), 0, kArclengthCells - 1);
    return turns * length + cumulative[i] + segment(i * h, tr);
  }

  double param(double s) const {
    if (kind == Kind::Circle) return wrap(s / a, kTwoPi);
    const double sr = wrap(s, length);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), sr);
    const int i = std::clamp(static_cast<int>(it - cumulative.begin()) - 1, 0, kArclengthCells - 1);
    const double h = cell_width();
    // Monotone cubic Hermite guess on the cell, slopes dt/ds = 1/speed,
    // limited by the Fritsch-Carlson bound of three times the secant.
    const double s0 = cumulative[i];
    const double s1 = cumulative[i + 1];
    const double ds = s1 - s0;
    const double secant = h / ds;
    const double m0 = std::min(1.0 / speed(i * h), 3.0 * secant);
    const double m1 = std::min(1.0 / speed((i + 1) * h), 3.0 * secant);
    const double u = (sr - s0) / ds;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    double t = h00 * (i * h) + h10 * ds * m0 + h01 * ((i + 1) * h) + h11 * ds * m1;
    for (int iter = 0; iter < 6; ++iter) {
      const double err = (cumulative[i] + segment(i * h, t)) - sr;
      const double step = err / speed(t);
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    return wrap(t, kTwoPi);
  }
};

BoundaryCurve::BoundaryCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

BoundaryCurve BoundaryCurve::circle(double radius) {
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "circle radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Circle;
  impl->a = impl->b = radius;
  impl->length = kTwoPi * radius;
  return BoundaryCurve(std::move(impl));
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  require(a > 0.0 && b > 0.0 && std::isfinite(a), ErrorCode::InvalidArgument,
          "ellipse semi-axes must be positive");
  require(a >= b, ErrorCode::InvalidArgument, "ellipse requires a >= b");
  if (a == b) return circle(a);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Ellipse;
  impl->a = a;
  impl->b = b;
  impl->build_table();
  return BoundaryCurve(std::move(impl));
}

BoundaryCurve BoundaryCurve::fourier(std::vector<double> coeffs) {
  require(!coeffs.empty() && coeffs.size() % 2 == 1, ErrorCode::InvalidArgument,
          "fourier coefficients must be [a0, a1, b1, a2, b2, ...]");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Fourier;
  impl->coeffs = std::move(coeffs);
  for (int i = 0; i < kArclengthCells; ++i) {
    require(impl->radius(0, i * impl->cell_width()) > 0.0, ErrorCode::InvalidArgument,
            "fourier radial function must stay positive");
  }
  impl->build_table();
  return BoundaryCurve(std::move(impl));
}

BoundaryCurve::Kind BoundaryCurve::kind() const { return impl_->kind; }
double BoundaryCurve::total_length() const { return impl_->length; }

double BoundaryCurve::param_at(double s) const { return impl_->param(s); }
double BoundaryCurve::arclength_at(double t) const { return impl_->arclength(t); }
Vec2 BoundaryCurve::position_at_param(double t) const { return impl_->point(t); }
Vec2 BoundaryCurve::velocity_at_param(double t) const { return impl_->velocity(t); }

double BoundaryCurve::curvature_at_param(double t) const {
  const Vec2 v = impl_->velocity(t);
  const double sp = v.norm();
  return v.cross(impl_->acceleration(t)) / (sp * sp * sp);
}

Vec2 BoundaryCurve::position(double s) const {
  if (impl_->kind == Kind::Circle) {
    const double t = s / impl_->a;
    return {impl_->a * std::cos(t), impl_->a * std::sin(t)};
  }
  return impl_->point(param_at(s));
}

Vec2 BoundaryCurve::tangent(double s) const {
  const Vec2 v = impl_->velocity(param_at(s));
  return v * (1.0 / v.norm());
}

Vec2 BoundaryCurve::inward_normal(double s) const { return tangent(s).perp(); }

double BoundaryCurve::curvature(double s) const { return curvature_at_param(param_at(s)); }

std::optional<std::pair<double, double>> BoundaryCurve::semi_axes() const {
  if (impl_->kind == Kind::Fourier) return std::nullopt;
  return std::make_pair(impl_->a, impl_->b);
}

double BoundaryCurve::min_curvature(int samples) const {
  double kmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) kmin = std::min(kmin, curvature_at_param(kTwoPi * i / samples));
  return kmin;
}

double BoundaryCurve::ray_exit_param(double t0, Vec2 origin, Vec2 dir) const {
  const Impl& c = *impl_;
  if (c.kind != Kind::Fourier) {
    // Implicit form x²/a² + y²/b² = 1; the far root of the quadratic along the ray.
    const double ia2 = 1.0 / (c.a * c.a);
    const double ib2 = 1.0 / (c.b * c.b);
    const double alpha = dir.x * dir.x * ia2 + dir.y * dir.y * ib2;
    const double beta = origin.x * dir.x * ia2 + origin.y * dir.y * ib2;
    const double gamma = origin.x * origin.x * ia2 + origin.y * origin.y * ib2 - 1.0;
    const double disc = beta * beta - alpha * gamma;
    if (!(disc >= 0.0) || beta >= 0.0) {
      throw Error(ErrorCode::NoTransversalHit, "ray does not enter the table");
    }
    const double u_far = (-beta + std::sqrt(disc)) / alpha;
    const Vec2 hit = origin + dir * u_far;
    return wrap(std::atan2(hit.y / c.b, hit.x / c.a), kTwoPi);
  }

  // Angular sweep for the sign change of cross(dir, γ(t) − origin) ahead of the ray.
  auto side = [&](double t) { return dir.cross(c.point(t) - origin); };
  auto ahead = [&](double t) { return dir.dot(c.point(t) - origin) > 0.0; };
  constexpr int kSweep = 1024;
  const double h = kTwoPi / kSweep;
  double prev_t = t0 + 1e-3 * h;
  double prev = side(prev_t);
  for (int j = 1; j <= kSweep; ++j) {
    const double t = t0 + j * h - (j == kSweep ? 1e-3 * h : 0.0);
    const double cur = side(t);
    if (std::signbit(cur) != std::signbit(prev) && (ahead(t) || ahead(prev_t))) {
      const double root = find_root(side, prev_t, t, 1e-16);
      return wrap(root, kTwoPi);
    }
    prev = cur;
    prev_t = t;
  }
  throw Error(ErrorCode::NoTransversalHit, "no transversal boundary intersection found");
}

LiouvilleTable LiouvilleTable::ellipse(double c, double N) {
  require(c > 0.0 && N > 0.0, ErrorCode::InvalidArgument, "liouville ellipse needs c > 0, N > 0");
  LiouvilleTable table;
  const double c2 = c * c;
  table.f = [c2](int n, double x) {
    if (n == 0) return c2 * std::sin(x) * std::sin(x);
    return -0.5 * c2 * std::pow(2.0, n) * cos_derivative(n, 2.0 * x);
  };
  table.q = [c2](int n, double y) {
    if (n == 0) return -c2 * std::sinh(y) * std::sinh(y);
    const double h = n % 2 == 0 ? std::cosh(2.0 * y) : std::sinh(2.0 * y);
    return -0.5 * c2 * std::pow(2.0, n) * h;
  };
  table.N = N;
  table.family = "ellipse";
  table.c = c;
  return table;
}

BoundaryCurve LiouvilleTable::boundary_curve() const {
  require(is_ellipse(), ErrorCode::Unsupported,
          "only the elliptic Liouville family embeds in the Euclidean plane");
  return BoundaryCurve::ellipse(c * std::cosh(N), c * std::sinh(N));
}

LiouvilleReport liouville_validate(const LiouvilleTable& table, int k_check) {
  constexpr int kGrid = 2048;
  constexpr double kTol = 1e-9;
  LiouvilleReport report;
  const auto& f = table.f;
  const auto& q = table.q;
  const double N = table.N;

  auto close = [](double u, double v) {
    return std::abs(u - v) <= kTol * std::max({1.0, std::abs(u), std::abs(v)});
  };

  {
    ConditionCheck c{"f_shape", true, {}, "f>0 off πZ, f(0)=f(π)=0, f''(0)>0"};
    for (int i = 1; i < kGrid && c.pass; ++i) {
      const double x = kPi * i / kGrid;
      if (!(f(0, x) > 0.0) || !(f(0, -x) > 0.0)) {
        c.pass = false;
        c.detail = "f not positive at x=" + std::to_string(x);
      }
      if (!close(f(0, x), f(0, -x)) || !close(f(0, x), f(0, x + kTwoPi))) {
        c.pass = false;
        c.detail = "f not even and 2π-periodic";
      }
    }
    if (c.pass && (!close(f(0, 0.0), 0.0) || !close(f(0, kPi), 0.0))) {
      c.pass = false;
      c.detail = "f(0) or f(π) nonzero";
    }
    if (c.pass && !(f(2, 0.0) > 0.0)) {
      c.pass = false;
      c.first_violated_order = 2;
      c.detail = "f''(0) <= 0";
    }
    report.conditions.push_back(c);
  }
  {
    ConditionCheck c{"q_shape", true, {}, "q<0 off 0, q(0)=0, q''(0)<0"};
    for (int i = 1; i <= kGrid && c.pass; ++i) {
      const double y = N * i / kGrid;
      if (!(q(0, y) < 0.0) || !(q(0, -y) < 0.0)) {
        c.pass = false;
        c.detail = "q not negative at y=" + std::to_string(y);
      }
      if (!close(q(0, y), q(0, -y))) {
        c.pass = false;
        c.detail = "q not even";
      }
    }
    if (c.pass && !close(q(0, 0.0), 0.0)) {
      c.pass = false;
      c.detail = "q(0) nonzero";
    }
    if (c.pass && !(q(2, 0.0) < 0.0)) {
      c.pass = false;
      c.first_violated_order = 2;
      c.detail = "q''(0) >= 0";
    }
    report.conditions.push_back(c);
  }
  {
    ConditionCheck c{"gluing", true, {}, "f^(2k)(πl) = (-1)^k q^(2k)(0)"};
    for (int k = 1; k <= k_check && c.pass; ++k) {
      const double qk = (k % 2 == 0 ? 1.0 : -1.0) * q(2 * k, 0.0);
      for (int l = 0; l <= 1; ++l) {
        const double fk = f(2 * k, kPi * l);
        if (!close(fk, qk)) {
          c.pass = false;
          c.first_violated_order = 2 * k;
          c.detail = "k=" + std::to_string(k) + ", l=" + std::to_string(l) + ": f^(2k)=" +
                     std::to_string(fk) + " vs (-1)^k q^(2k)(0)=" + std::to_string(qk);
          break;
        }
      }
    }
    report.conditions.push_back(c);
  }
  {
    ConditionCheck c{"convex_boundary", true, {}, "q'(N)<0"};
    if (!(q(1, N) < 0.0)) {
      c.pass = false;
      c.first_violated_order = 1;
      c.detail = "q'(N)=" + std::to_string(q(1, N));
    }
    report.conditions.push_back(c);
  }
  {
    ConditionCheck c{"f_symmetry", true, {}, "f(x)=f(π−x), f increasing on [0,π/2]"};
    double prev = f(0, 0.0);
    for (int i = 1; i <= kGrid && c.pass; ++i) {
      const double x = 0.5 * kPi * i / kGrid;
      const double fx = f(0, x);
      if (!(fx > prev)) {
        c.pass = false;
        c.detail = "f not strictly increasing near x=" + std::to_string(x);
      }
      if (!close(fx, f(0, kPi - x))) {
        c.pass = false;
        c.detail = "f(x) != f(π−x) at x=" + std::to_string(x);
      }
      prev = fx;
    }
    report.conditions.push_back(c);
  }
  report.classical_type = std::all_of(report.conditions.begin(), report.conditions.end(),
                                      [](const ConditionCheck& c) { return c.pass; });
  return report;
}

Domain parse_domain(const nlohmann::json& spec) {
  require(spec.is_object() && spec.contains("type"), ErrorCode::ConfigError,
          "domain spec must be an object with a \"type\" key");
  const std::string type = spec.at("type").get<std::string>();
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : spec.items()) {
      (void)value;
      const bool known = key == "type" || std::any_of(allowed.begin(), allowed.end(),
                                                      [&](const char* k) { return key == k; });
      require(known, ErrorCode::ConfigError, "unknown domain key \"" + key + "\"");
    }
  };
  Domain domain;
  try {
    if (type == "circle") {
      check_keys({"r"});
      domain.curve = BoundaryCurve::circle(spec.at("r").get<double>());
    } else if (type == "ellipse") {
      check_keys({"a", "b"});
      domain.curve = BoundaryCurve::ellipse(spec.at("a").get<double>(), spec.at("b").get<double>());
    } else if (type == "fourier") {
      check_keys({"coeffs"});
      domain.curve = BoundaryCurve::fourier(spec.at("coeffs").get<std::vector<double>>());
    } else if (type == "liouville") {
      check_keys({"family", "c", "N"});
      const std::string family = spec.at("family").get<std::string>();
      require(family == "ellipse", ErrorCode::ConfigError, "unknown liouville family " + family);
      domain.table = LiouvilleTable::ellipse(spec.at("c").get<double>(), spec.at("N").get<double>());
      domain.curve = domain.table->boundary_curve();
    } else {
      throw Error(ErrorCode::ConfigError, "unknown domain type " + type);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed domain spec: ") + e.what());
  }
  return domain;
}

}  // namespace billiards
