#include "billiards/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "billiards/bessel.hpp"
#include "billiards/errors.hpp"

namespace billiards {

using cd = std::complex<double>;

double BirkhoffData::D() const { return L0 - kTwoPi * I0 * omega; }

BirkhoffData disk_birkhoff_data(double theta, int jet_order) {
  require(theta > 0.0 && theta < kPi, ErrorCode::InvalidArgument, "theta must lie in (0, π)");
  require(jet_order >= 1, ErrorCode::InvalidArgument, "jet order must be >= 1");
  BirkhoffData d;
  const double I = std::cos(theta);
  d.I0 = I;
  d.L0 = 2.0 * (std::sin(theta) - theta * I);
  d.omega = -theta / kPi;  // L' = −2 arccos I
  // L'' = 2(1 − I²)^{−1/2}; higher derivatives by the recursion for g = (1 − I²)^{−1/2}:
  // g' = I g³ and in general g^(n) = P_n(I) g^{2n+1} with P_{n+1} = (1 − I²)P_n' + (2n+1) I P_n.
  std::vector<double> P = {1.0};  // polynomial coefficients of P_n
  const double g = 1.0 / std::sqrt(1.0 - I * I);
  for (int n = 0; n + 2 <= jet_order; ++n) {
    double Pn = 0.0, pw = 1.0;
    for (double coef : P) {
      Pn += coef * pw;
      pw *= I;
    }
    d.L_jet.push_back(2.0 * Pn * std::pow(g, 2 * n + 1));
    std::vector<double> next(P.size() + 1, 0.0);
    for (std::size_t i = 1; i < P.size(); ++i) {  // (1 − I²) P'
      next[i - 1] += i * P[i];
      next[i + 1] -= i * P[i];
    }
    for (std::size_t i = 0; i < P.size(); ++i) next[i + 1] += (2 * n + 1) * P[i];
    P = std::move(next);
  }
  return d;
}

BirkhoffData birkhoff_data_from(const ActionData& action, std::vector<double> extra_jet) {
  BirkhoffData d;
  d.I0 = action.I0;
  d.omega = action.gradL / kTwoPi;
  d.L0 = action.L0;
  if (action.hessL) {
    d.L_jet.push_back(*action.hessL);
    d.L_jet.insert(d.L_jet.end(), extra_jet.begin(), extra_jet.end());
  }
  return d;
}

IndexSearch find_indices(const BirkhoffData& data, double d_n, long k_min, long k_max) {
  if (data.I0 == 0.0) throw Error(ErrorCode::DegenerateAction, "I0 = 0");
  require(d_n >= 0.0, ErrorCode::InvalidArgument, "d_n must be nonnegative");
  IndexSearch out;
  out.min_mu0_over_q = std::numeric_limits<double>::infinity();
  for (long k = k_min; k <= k_max; ++k) {
    const double lambda = (k + data.maslov_theta0 / 4.0) / data.I0;
    if (!(lambda >= 1.0)) continue;
    const double second = lambda * data.L0;
    const double shift = kPi * data.maslov_theta / 2.0;
    const long kn = std::lround((second + shift) / kTwoPi);
    if (std::abs(kTwoPi * kn - shift - second) > d_n) continue;
    out.indices.push_back({k, kn, lambda});
    out.min_mu0_over_q = std::min(out.min_mu0_over_q, lambda / std::hypot(double(k), double(kn)));
  }
  if (out.indices.empty()) out.min_mu0_over_q = 0.0;
  return out;
}

namespace {

// Truncated power series in ε with a fixed number of terms.
struct Series {
  std::vector<cd> a;
  explicit Series(std::size_t n, cd c0 = 0.0) : a(n, 0.0) { a[0] = c0; }

  std::size_t size() const { return a.size(); }
  Series operator+(const Series& o) const {
    Series r(*this);
    for (std::size_t i = 0; i < size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  Series operator-(const Series& o) const {
    Series r(*this);
    for (std::size_t i = 0; i < size(); ++i) r.a[i] -= o.a[i];
    return r;
  }
  Series operator*(cd s) const {
    Series r(*this);
    for (auto& v : r.a) v *= s;
    return r;
  }
  Series operator*(const Series& o) const {
    Series r(size());
    for (std::size_t i = 0; i < size(); ++i) {
      if (a[i] == cd{}) continue;
      for (std::size_t j = 0; i + j < size(); ++j) r.a[i + j] += a[i] * o.a[j];
    }
    return r;
  }
  // multiply by ε^k
  Series shifted(std::size_t k) const {
    Series r(size());
    for (std::size_t i = 0; i + k < size(); ++i) r.a[i + k] = a[i];
    return r;
  }
  // 1/s for s with s_0 ≠ 0
  Series inverse() const {
    Series r(size());
    r.a[0] = 1.0 / a[0];
    for (std::size_t n = 1; n < size(); ++n) {
      cd acc = 0.0;
      for (std::size_t k = 1; k <= n; ++k) acc += a[k] * r.a[n - k];
      r.a[n] = -acc / a[0];
    }
    return r;
  }
};

struct Residuals {
  Series eq1;
  Series eq2;
};

// Both quantization conditions multiplied by ε, in the unknowns
// εμ = 1 + Σ c_r ε^{r+1} and ζ − I0 = δ = Σ b_s ε^{s+1}.
Residuals residuals(const BirkhoffData& d, const std::vector<cd>& c, const std::vector<cd>& b, double W0,
                    double V0, int jet_needed, std::size_t n) {
  Series mt(n, 1.0);  // εμ
  for (std::size_t r = 0; r < c.size() && r + 1 < n; ++r) mt.a[r + 1] += c[r];
  Series delta(n);
  for (std::size_t s = 0; s < b.size() && s + 1 < n; ++s) delta.a[s + 1] = b[s];

  Series eq1 = mt * Series(n, d.I0) + mt * delta - Series(n, d.I0) - Series(n, W0).shifted(1);

  // L(I0 + δ) from the jet; δ = O(ε) so δ^k only matters for k < n
  Series Lz(n, d.L0);
  Series dpow = delta;
  double fact = 1.0;
  const int top = std::min<int>(static_cast<int>(n) - 1, jet_needed);
  for (int k = 1; k <= top; ++k) {
    fact *= k;
    const double Lk = k == 1 ? d.gradL() : d.L_jet.at(k - 2);
    Lz = Lz + dpow * (Lk / fact);
    dpow = dpow * delta;
  }

  // x = (ε/εμ)·Σ p_{j,a} δ^a (ε/εμ)^j
  const Series inv_mt = mt.inverse();
  const Series eps_over = inv_mt.shifted(1);
  Series p(n);
  for (const auto& [key, val] : d.birkhoff_p) {
    const auto [j, a] = key;
    Series term(n, val);
    for (int i = 0; i < a; ++i) term = term * delta;
    for (int i = 0; i < j; ++i) term = term * eps_over;
    p = p + term;
  }
  const Series x = p * eps_over;
  Series logx(n), xp = x;
  for (std::size_t m = 1; m < n; ++m) {
    logx = logx + xp * ((m % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(m));
    xp = xp * x;
  }
  const cd inv_i(0.0, -1.0);
  Series eq2 = mt * Lz - Series(n, d.L0) - Series(n, V0).shifted(1) + (logx * inv_i).shifted(1);
  return {eq1, eq2};
}

}  // namespace

QuasiEigenvalue solve_recursion_seeded(const BirkhoffData& data, double W0, double V0, double mu0, int M) {
  require(M >= 0, ErrorCode::InvalidArgument, "order M must be nonnegative");
  require(mu0 >= 1.0, ErrorCode::InvalidArgument, "mu0 must be >= 1");
  const double D = data.D();
  if (!(D > 0.0)) throw Error(ErrorCode::NonPositiveD, fmt::format("D(I0) = {:.17g}", D));
  if (data.jet_order() < M + 1) {
    throw Error(ErrorCode::MissingJet,
                fmt::format("order M={} needs the L jet to order {}, have {}", M, M + 1, data.jet_order()));
  }
  for (const auto& [key, val] : data.birkhoff_p) {
    require(key.first >= 0 && key.second >= 0, ErrorCode::InvalidArgument, "negative Birkhoff index");
    (void)val;
  }
  // order j of the conditions sits at ε^{j+1} after multiplying by ε
  const std::size_t n = static_cast<std::size_t>(M) + 3;
  std::vector<cd> c, b;
  const double L1 = data.gradL();
  auto clipped = data;
  // p_{j,a} with j + a > M − 1 would act beyond the truncation order
  for (auto it = clipped.birkhoff_p.begin(); it != clipped.birkhoff_p.end();) {
    it = it->first.first + it->first.second > M - 1 ? clipped.birkhoff_p.erase(it) : std::next(it);
  }
  for (int j = 0; j <= M; ++j) {
    c.push_back(0.0);
    b.push_back(0.0);
    const auto r = residuals(clipped, c, b, W0, V0, M + 1, n);
    const cd W = -r.eq1.a[j + 1];
    const cd V = -r.eq2.a[j + 1];
    // I0 c + b = W, L0 c + L1 b = V; determinant −D
    c[j] = (V - L1 * W) / D;
    b[j] = W - c[j] * data.I0;
  }
  // b_{M+1} from the first condition alone
  b.push_back(0.0);
  c.push_back(0.0);
  const auto r = residuals(clipped, c, b, W0, V0, M + 1, n);
  b.back() = -r.eq1.a[M + 2];
  c.pop_back();

  QuasiEigenvalue out;
  out.M = M;
  out.q.mu0 = mu0;
  out.W0 = W0;
  out.V0 = V0;
  out.c_complex = c;
  out.b_complex = b;
  for (const auto& v : c) {
    out.c.push_back(v.real());
    out.imag_defect = std::max(out.imag_defect, std::abs(v.imag()));
  }
  for (const auto& v : b) {
    out.b.push_back(v.real());
    out.imag_defect = std::max(out.imag_defect, std::abs(v.imag()));
  }
  return out;
}

QuasiEigenvalue solve_recursion(const BirkhoffData& data, const QuantumIndex& q, int M) {
  const double W0 = q.k + data.maslov_theta0 / 4.0 - q.mu0 * data.I0;
  const double V0 = kTwoPi * q.kn - kPi * data.maslov_theta / 2.0 - q.mu0 * data.L0;
  auto out = solve_recursion_seeded(data, W0, V0, q.mu0, M);
  out.q = q;
  return out;
}

std::pair<double, double> evaluate_mu(const QuasiEigenvalue& qe, const std::map<int, double>& overrides) {
  require(qe.q.mu0 >= 1.0, ErrorCode::InvalidArgument, "mu0 must be >= 1");
  const double eps = 1.0 / qe.q.mu0;
  double mu = qe.q.mu0;
  double pw = 1.0;
  for (std::size_t j = 0; j < qe.c.size(); ++j) {
    const auto it = overrides.find(static_cast<int>(j));
    mu += (it == overrides.end() ? qe.c[j] : it->second) * pw;
    pw *= eps;
  }
  return {mu, mu * mu};
}

EbkRow disk_ebk(int m, int p, int theta0, int theta) {
  const double action = m + theta0 / 4.0;
  const double phase = kTwoPi * p - kPi * theta / 2.0;
  require(action > 0.0 && phase > 0.0, ErrorCode::InvalidArgument, "indices give no whispering-gallery mode");
  // μ = action / cos θ; 2 action (tan θ − θ) = phase
  auto g = [&](double t) { return 2.0 * action * (std::tan(t) - t) - phase; };
  const double t = find_root(g, 1e-12, 0.5 * kPi - 1e-12);
  EbkRow row;
  row.m = m;
  row.p = p;
  row.theta = t;
  row.mu = action / std::cos(t);
  return row;
}

std::vector<EbkRow> disk_ebk_compare(const std::vector<int>& ms, int p, int theta0, int theta) {
  std::vector<EbkRow> rows;
  for (int m : ms) {
    EbkRow row = disk_ebk(m, p, theta0, theta);
    row.bessel_zero = bessel_j_zero(m, p);
    row.rel_error = std::abs(row.mu - row.bessel_zero) / row.bessel_zero;
    rows.push_back(row);
  }
  return rows;
}

std::pair<int, int> calibrate_disk_maslov(int m_lo, int m_hi) {
  std::vector<int> ms;
  for (int m = m_lo; m <= m_hi; ++m) ms.push_back(m);
  std::pair<int, int> best{0, 0};
  double best_err = std::numeric_limits<double>::infinity();
  for (int t0 = 0; t0 < 4; ++t0) {
    for (int t = 0; t < 4; ++t) {
      double worst = 0.0;
      for (const auto& row : disk_ebk_compare(ms, 1, t0, t)) worst = std::max(worst, row.rel_error);
      if (worst < best_err) {
        best_err = worst;
        best = {t0, t};
      }
    }
  }
  return best;
}

void write_quasi_csv_header(std::ostream& out) { out << "k,k_n,mu0,c0,c1,c2,mu,mu_squared\n"; }

void write_quasi_csv_row(std::ostream& out, const QuasiEigenvalue& qe) {
  auto cj = [&](std::size_t j) { return j < qe.c.size() ? fmt::format("{:.17g}", qe.c[j]) : std::string(); };
  const auto [mu, mu2] = evaluate_mu(qe);
  out << fmt::format("{},{},{:.17g},{},{},{},{:.17g},{:.17g}\n", qe.q.k, qe.q.kn, qe.q.mu0, cj(0), cj(1), cj(2), mu,
                     mu2);
}

}  // namespace billiards
