#include "billiards/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "billiards/errors.hpp"
#include "billiards/numerics.hpp"

namespace billiards {

using cd = std::complex<double>;

int lattice_norm(const LatticeIndex& k) {
  int n = 0;
  for (int v : k) n += std::abs(v);
  return n;
}

namespace {

std::string index_string(const LatticeIndex& k) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.size(); ++i) out += (i ? "," : "") + std::to_string(k[i]);
  return out + ")";
}

double phase_turns(const LatticeIndex& k, const std::vector<double>& omega) {
  long double dot = 0.0L;
  for (std::size_t i = 0; i < k.size(); ++i) dot += static_cast<long double>(k[i]) * omega[i];
  return static_cast<double>(dot - std::nearbyint(dot));
}

// e^{−2πi⟨k,ω⟩} − 1 computed from the reduced phase
cd lomega_multiplier(const LatticeIndex& k, const std::vector<double>& omega) {
  return std::polar(1.0, -kTwoPi * phase_turns(k, omega)) - 1.0;
}

}  // namespace

TorusFunction::TorusFunction(int dim, Coeffs coeffs) : dim_(dim) {
  for (auto& [k, v] : coeffs) set(k, v);
}

TorusFunction TorusFunction::mode(int k, cd amplitude) {
  TorusFunction u(1);
  u.set({k}, amplitude);
  return u;
}

TorusFunction TorusFunction::cosine(int k, double amplitude) {
  TorusFunction u(1);
  if (k == 0) {
    u.set({0}, amplitude);
  } else {
    u.set({k}, 0.5 * amplitude);
    u.set({-k}, 0.5 * amplitude);
  }
  return u;
}

cd TorusFunction::coeff(const LatticeIndex& k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cd{} : it->second;
}

void TorusFunction::set(const LatticeIndex& k, cd value) {
  require(static_cast<int>(k.size()) == dim_, ErrorCode::InvalidArgument, "lattice index has wrong dimension");
  if (value == cd{}) {
    coeffs_.erase(k);
  } else {
    coeffs_[k] = value;
  }
}

void TorusFunction::add(const LatticeIndex& k, cd value) { set(k, coeff(k) + value); }

int TorusFunction::max_order() const {
  int m = 0;
  for (const auto& [k, v] : coeffs_) m = std::max(m, lattice_norm(k));
  return m;
}

bool TorusFunction::is_real(double tol) const {
  for (const auto& [k, v] : coeffs_) {
    LatticeIndex neg(k);
    for (int& x : neg) x = -x;
    if (std::abs(coeff(neg) - std::conj(v)) > tol) return false;
  }
  return true;
}

cd TorusFunction::operator()(const std::vector<double>& phi) const {
  require(static_cast<int>(phi.size()) == dim_, ErrorCode::InvalidArgument, "point has wrong dimension");
  cd acc{};
  for (const auto& [k, v] : coeffs_) {
    double arg = 0.0;
    for (int i = 0; i < dim_; ++i) arg += k[i] * phi[i];
    acc += v * std::polar(1.0, arg);
  }
  return acc;
}

TorusFunction TorusFunction::operator+(const TorusFunction& o) const {
  require(dim_ == o.dim_, ErrorCode::InvalidArgument, "dimension mismatch");
  TorusFunction out(*this);
  for (const auto& [k, v] : o.coeffs_) out.add(k, v);
  return out;
}

TorusFunction TorusFunction::operator-(const TorusFunction& o) const { return *this + o * cd(-1.0); }

TorusFunction TorusFunction::operator*(cd a) const {
  TorusFunction out(dim_);
  for (const auto& [k, v] : coeffs_) out.set(k, a * v);
  return out;
}

TorusFunction TorusFunction::operator*(const TorusFunction& o) const {
  require(dim_ == o.dim_, ErrorCode::InvalidArgument, "dimension mismatch");
  TorusFunction out(dim_);
  for (const auto& [k1, v1] : coeffs_) {
    for (const auto& [k2, v2] : o.coeffs_) {
      LatticeIndex k(k1);
      for (int i = 0; i < dim_; ++i) k[i] += k2[i];
      out.add(k, v1 * v2);
    }
  }
  return out;
}

double TorusFunction::max_abs_coeff_diff(const TorusFunction& o) const {
  double m = 0.0;
  for (const auto& [k, v] : coeffs_) m = std::max(m, std::abs(v - o.coeff(k)));
  for (const auto& [k, v] : o.coeffs_) m = std::max(m, std::abs(v - coeff(k)));
  return m;
}

double wiener_norm(const TorusFunction& u, double s) {
  require(s >= 0.0, ErrorCode::InvalidArgument, "Wiener index must be nonnegative");
  double acc = 0.0;
  for (const auto& [k, v] : u.coeffs()) acc += std::pow(1.0 + lattice_norm(k), s) * std::abs(v);
  return acc;
}

TorusFunction apply_Lomega(const TorusFunction& u, const std::vector<double>& omega) {
  require(static_cast<int>(omega.size()) == u.dim(), ErrorCode::InvalidArgument, "frequency has wrong dimension");
  TorusFunction out(u.dim());
  for (const auto& [k, v] : u.coeffs()) out.set(k, v * lomega_multiplier(k, omega));
  return out;
}

TorusFunction solve_homological(const TorusFunction& f, const std::vector<double>& omega, double kappa,
                                double tau) {
  require(static_cast<int>(omega.size()) == f.dim(), ErrorCode::InvalidArgument, "frequency has wrong dimension");
  require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
  const LatticeIndex zero(f.dim(), 0);
  if (std::abs(f.coeff(zero)) != 0.0) {
    throw Error(ErrorCode::NonZeroMean, fmt::format("f_0 = {:.3g}", std::abs(f.coeff(zero))));
  }
  TorusFunction u(f.dim());
  long position = 0;
  for (const auto& [k, v] : f.coeffs()) {
    const double gap = std::abs(phase_turns(k, omega));
    if (gap < kappa * std::pow(lattice_norm(k), -tau)) {
      throw Error(ErrorCode::ResonantMode, "mode " + index_string(k) + fmt::format(" has |<k,w>-n| = {:.3g}", gap),
                  position);
    }
    u.set(k, v / lomega_multiplier(k, omega));
    ++position;
  }
  return u;
}

SupBoundReport derivative_sup_bound_check(const TorusFunction& u, int s, int grid) {
  require(s >= 0, ErrorCode::InvalidArgument, "derivative order must be nonnegative");
  const int d = u.dim();
  require(d <= 2, ErrorCode::Unsupported, "grid check implemented for dimensions 1 and 2");
  const int per_dim = d == 1 ? grid : std::max(16, static_cast<int>(std::sqrt(static_cast<double>(grid))));
  SupBoundReport report;
  report.norm = wiener_norm(u, s);
  report.sup_derivative.assign(s + 1, 0.0);

  // multi-indices α with |α| = j
  auto alphas = [d](int j) {
    std::vector<LatticeIndex> out;
    if (d == 1) return std::vector<LatticeIndex>{{j}};
    for (int a = 0; a <= j; ++a) out.push_back({a, j - a});
    return out;
  };
  const long points = d == 1 ? per_dim : static_cast<long>(per_dim) * per_dim;
  for (int j = 0; j <= s; ++j) {
    for (const auto& alpha : alphas(j)) {
      for (long p = 0; p < points; ++p) {
        std::vector<double> phi(d);
        phi[0] = kTwoPi * static_cast<double>(p % per_dim) / per_dim;
        if (d == 2) phi[1] = kTwoPi * static_cast<double>(p / per_dim) / per_dim;
        cd acc{};
        for (const auto& [k, v] : u.coeffs()) {
          cd factor = 1.0;
          double arg = 0.0;
          for (int i = 0; i < d; ++i) {
            factor *= std::pow(cd(0.0, k[i]), alpha[i]);
            arg += k[i] * phi[i];
          }
          acc += v * factor * std::polar(1.0, arg);
        }
        report.sup_derivative[j] = std::max(report.sup_derivative[j], std::abs(acc));
      }
    }
    if (report.sup_derivative[j] > report.norm * (1.0 + 1e-12)) report.holds = false;
  }
  return report;
}

TorusFunction read_coefficients(std::istream& in, int dim) {
  TorusFunction u(dim);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    LatticeIndex k(dim);
    double re = 0.0, im = 0.0;
    if (!(ls >> std::ws) || ls.eof()) continue;
    for (int i = 0; i < dim; ++i) {
      if (!(ls >> k[i])) throw Error(ErrorCode::ConfigError, "bad lattice index", lineno);
    }
    if (!(ls >> re >> im)) throw Error(ErrorCode::ConfigError, "expected 're im'", lineno);
    std::string extra;
    if (ls >> extra) throw Error(ErrorCode::ConfigError, "trailing tokens", lineno);
    u.add(k, {re, im});
  }
  return u;
}

void write_coefficients(std::ostream& out, const TorusFunction& u) {
  for (const auto& [k, v] : u.coeffs()) {
    for (int x : k) out << x << ' ';
    out << fmt::format("{:.17g} {:.17g}\n", v.real(), v.imag());
  }
}

}  // namespace billiards
