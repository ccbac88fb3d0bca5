#include "billiards/bessel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "billiards/errors.hpp"
#include "billiards/numerics.hpp"

namespace billiards {

std::vector<double> bessel_j_zeros(int m, int count) {
  require(m >= 0 && count >= 0, ErrorCode::InvalidArgument, "bessel order and count must be nonnegative");
  std::vector<double> out;
  auto J = [m](double x) { return std::cyl_bessel_j(static_cast<double>(m), x); };
  // zeros of J_m lie beyond m and are spaced by about π
  constexpr double step = 0.05;
  double x = std::max(static_cast<double>(m), step);
  double fx = J(x);
  while (static_cast<int>(out.size()) < count) {
    const double x2 = x + step;
    const double f2 = J(x2);
    if (fx == 0.0) {
      out.push_back(x);
    } else if (std::signbit(fx) != std::signbit(f2)) {
      try {
        out.push_back(find_root(J, x, x2, 1e-16));
      } catch (const Error& e) {
        throw Error(ErrorCode::OracleFailure, fmt::format("J_{} zero near {}: {}", m, x, e.what()));
      }
    }
    x = x2;
    fx = f2;
    if (x > 10.0 * (m + 10) + 4.0 * count) throw Error(ErrorCode::OracleFailure, "bessel zero scan ran away");
  }
  return out;
}

double bessel_j_zero(int m, int p) {
  require(p >= 1, ErrorCode::InvalidArgument, "zero rank starts at 1");
  return bessel_j_zeros(m, p).back();
}

std::vector<double> disk_dirichlet_eigenvalues(double lambda_max) {
  std::vector<double> out;
  const double jmax = std::sqrt(lambda_max);
  for (int m = 0; m <= jmax; ++m) {
    auto J = [m](double x) { return std::cyl_bessel_j(static_cast<double>(m), x); };
    double x = std::max(static_cast<double>(m), 0.05);
    double fx = J(x);
    while (x < jmax) {
      const double x2 = std::min(x + 0.05, jmax);
      const double f2 = J(x2);
      if (std::signbit(fx) != std::signbit(f2) && fx != 0.0) {
        const double z = find_root(J, x, x2, 1e-16);
        out.insert(out.end(), m == 0 ? 1 : 2, z * z);
      }
      if (x2 >= jmax) break;
      x = x2;
      fx = f2;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace billiards
