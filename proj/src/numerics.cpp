#include "billiards/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "billiards/errors.hpp"

namespace billiards {

std::vector<double> birkhoff_weights(std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j + 1) / static_cast<double>(n + 1);
    w[j] = std::exp(-1.0 / (t * (1.0 - t)));
    total += w[j];
  }
  for (auto& v : w) v /= total;
  return w;
}

double weighted_average(const std::vector<double>& g, const std::vector<double>& weights) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) acc += weights[j] * g[j];
  return acc;
}

double periodic_mean(const std::function<double(double)>& f, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += f(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return acc / static_cast<double>(n);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require(std::signbit(flo) != std::signbit(fhi), ErrorCode::NewtonDivergence,
          "root not bracketed");
  std::uintmax_t iters = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol * (1.0 + std::abs(a)); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  return 0.5 * (a + b);
}

double eval_real_series(const std::vector<std::complex<double>>& c, double phi) {
  if (c.empty()) return 0.0;
  double acc = c[0].real();
  const std::complex<double> step = std::polar(1.0, phi);
  std::complex<double> e = step;
  for (std::size_t k = 1; k < c.size(); ++k) {
    acc += 2.0 * (c[k] * e).real();
    e *= step;
  }
  return acc;
}

double eval_real_series_derivative(const std::vector<std::complex<double>>& c, double phi) {
  double acc = 0.0;
  const std::complex<double> step = std::polar(1.0, phi);
  std::complex<double> e = step;
  for (std::size_t k = 1; k < c.size(); ++k) {
    acc += 2.0 * (std::complex<double>(0.0, static_cast<double>(k)) * c[k] * e).real();
    e *= step;
  }
  return acc;
}

}  // namespace billiards
