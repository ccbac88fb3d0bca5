#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace billiards {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {a * x, a * y}; }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  // Counterclockwise quarter turn.
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }

// x reduced to [0, period).
inline double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

// x reduced to [-period/2, period/2).
inline double wrap_centered(double x, double period) {
  return wrap(x + 0.5 * period, period) - 0.5 * period;
}

// Distance from x to the nearest integer.
inline double dist_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

// Normalized bump weights for weighted Birkhoff averages,
// w(t) = exp(-1/(t(1-t))) sampled at t = (j+1)/(n+1).
std::vector<double> birkhoff_weights(std::size_t n);

// Weighted Birkhoff average of samples g[0..n).
double weighted_average(const std::vector<double>& g, const std::vector<double>& weights);

// Periodic trapezoid rule on [0, 2π) with n nodes, returns the mean (1/2π)∫f.
double periodic_mean(const std::function<double(double)>& f, std::size_t n);

// Fixed high-order Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

// Bracketed root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15);

// Evaluate a real trigonometric series a0 + Σ_k (a_k cos kφ + b_k sin kφ) from complex
// coefficients c_k (k ≥ 0) of the form g(φ) = Re(c_0) + 2 Re Σ_{k≥1} c_k e^{ikφ}.
double eval_real_series(const std::vector<std::complex<double>>& c, double phi);
double eval_real_series_derivative(const std::vector<std::complex<double>>& c, double phi);

}  // namespace billiards
