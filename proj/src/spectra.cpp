#include "billiards/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "billiards/errors.hpp"

namespace billiards {

Spectrum make_spectrum(std::vector<double> eigenvalues, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  for (double v : eigenvalues) require(std::isfinite(v), ErrorCode::InvalidArgument, "eigenvalues must be finite");
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return {std::move(eigenvalues), n};
}

Spectrum read_spectrum(std::istream& in, int n) {
  std::vector<double> vals;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorCode::ConfigError, "unreadable eigenvalue", lineno);
    }
    std::string rest;
    if (ls >> rest) throw Error(ErrorCode::ConfigError, "one eigenvalue per line", lineno);
    vals.push_back(v);
  }
  return make_spectrum(std::move(vals), n);
}

Spectrum read_spectrum_file(const std::string& path, int n) {
  std::ifstream f(path);
  require(f.good(), ErrorCode::ConfigError, "cannot open spectrum file " + path);
  return read_spectrum(f, n);
}

void write_spectrum(std::ostream& out, const Spectrum& spec) {
  for (double v : spec.eigenvalues) out << fmt::format("{:.17g}\n", v);
}

namespace {

// Solve g(x) = 0 for increasing g on [lo, hi] with g(lo) ≤ 0 ≤ g(hi).
template <class G, class DG>
double safeguarded_newton(G g, DG dg, double lo, double hi) {
  boost::uintmax_t iters = 100;
  auto fn = [&](double x) { return std::make_tuple(g(x), dg(x)); };
  return boost::math::tools::newton_raphson_iterate(fn, 0.5 * (lo + hi), lo, hi, 50, iters);
}

}  // namespace

IntervalClusterSet build_clusters(const Spectrum& spec, double c, double d, double alpha) {
  require(c > 0.0, ErrorCode::InvalidArgument, "c must be positive");
  if (!(d > 0.5 * spec.n)) {
    throw Error(ErrorCode::DTooSmall, fmt::format("need d > n/2, got d={} with n={}", d, spec.n));
  }
  // x + 2c x^{-d} is increasing only beyond this point
  const double turn = std::pow(2.0 * c * d, 1.0 / (d + 1.0));
  require(alpha > turn, ErrorCode::InvalidArgument,
          fmt::format("alpha must exceed {:.6g} so the cluster windows are monotone", turn));

  auto w = [&](double x) { return 2.0 * c * std::pow(x, -d); };
  auto dw = [&](double x) { return -2.0 * c * d * std::pow(x, -d - 1.0); };

  IntervalClusterSet set;
  set.c = c;
  set.d = d;
  set.alpha = alpha;
  set.n = spec.n;

  for (double lam : spec.eigenvalues) {
    if (lam <= turn) continue;
    // right end: x − w(x) = λ
    const double r = safeguarded_newton([&](double x) { return x - w(x) - lam; },
                                        [&](double x) { return 1.0 - dw(x); }, lam, lam + w(lam));
    if (r < alpha) continue;
    double l;
    if (alpha + w(alpha) >= lam) {
      l = alpha;
    } else {
      l = safeguarded_newton([&](double x) { return x + w(x) - lam; }, [&](double x) { return 1.0 + dw(x); },
                             std::max(alpha, lam - w(alpha)), lam);
    }
    if (!set.raw.empty() && l <= set.raw.back().b) {
      set.raw.back().b = std::max(set.raw.back().b, r);
    } else {
      set.raw.push_back({l, r});
    }
  }
  if (set.raw.empty()) {
    throw Error(ErrorCode::EmptySpectrumAboveAlpha, fmt::format("no eigenvalue window reaches alpha={}", alpha));
  }
  std::vector<Interval> kept;
  for (const auto& iv : set.raw) {
    const Interval s{iv.a + 0.75 * w(iv.a), iv.b - 0.75 * w(iv.b)};
    if (s.b > s.a) {
      set.intervals.push_back(s);
      kept.push_back(iv);
    }
  }
  set.raw = std::move(kept);
  return set;
}

std::optional<std::size_t> find_interval(const std::vector<Interval>& intervals, double x) {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), x,
                             [](double v, const Interval& iv) { return v < iv.a; });
  if (it == intervals.begin()) return std::nullopt;
  --it;
  if (x <= it->b) return static_cast<std::size_t>(it - intervals.begin());
  return std::nullopt;
}

namespace {

double median(std::vector<double> v) {
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

}  // namespace

H1Report verify_H1(const IntervalClusterSet& set, int s) {
  const auto& I = set.intervals;
  require(I.size() >= 10, ErrorCode::InvalidArgument, "need at least 10 intervals");
  require(s >= 0, ErrorCode::InvalidArgument, "s must be nonnegative");
  H1Report rep;
  rep.min_gap_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < I.size(); ++k) {
    if (!(I[k].b > I[k].a)) rep.disjoint_increasing = false;
    rep.max_length = std::max(rep.max_length, I[k].b - I[k].a);
    rep.weighted_lengths.push_back(std::pow(I[k].a, 0.5 * s) * (I[k].b - I[k].a));
    if (k + 1 < I.size()) {
      if (!(I[k + 1].a > I[k].b)) rep.disjoint_increasing = false;
      const double margin = I[k + 1].a - I[k].b - set.c * std::pow(I[k].b, -set.d);
      if (margin < rep.min_gap_margin) rep.min_gap_margin = margin;
      if (margin < 0.0 && !rep.first_gap_violation) rep.first_gap_violation = k;
    }
  }
  // trend on the upper half, four blocks
  const std::size_t start = I.size() / 2, len = (I.size() - start) / 4;
  for (std::size_t b = 0; b < 4; ++b) {
    const auto first = rep.weighted_lengths.begin() + static_cast<long>(start + b * len);
    rep.tail_medians.push_back(median({first, first + static_cast<long>(len)}));
  }
  rep.tail_decreasing = true;
  for (std::size_t b = 1; b < rep.tail_medians.size(); ++b) {
    if (!(rep.tail_medians[b] < rep.tail_medians[b - 1])) rep.tail_decreasing = false;
  }
  rep.s_in_guaranteed_range = s < 2.0 * set.d - set.n;
  rep.pass = rep.disjoint_increasing && rep.min_gap_margin >= 0.0 && rep.tail_decreasing;
  return rep;
}

H2Report verify_H2(const std::vector<Spectrum>& spectra, const IntervalClusterSet& set, double a) {
  require(a >= 1.0, ErrorCode::InvalidArgument, "cutoff a must be at least 1");
  require(!set.intervals.empty(), ErrorCode::InvalidArgument, "empty interval set");
  H2Report rep;
  const double top = set.intervals.back().b;
  for (std::size_t t = 0; t < spectra.size(); ++t) {
    for (double lam : spectra[t].eigenvalues) {
      if (lam < a || lam > top) continue;
      ++rep.checked;
      if (!find_interval(set.intervals, lam) && !rep.first_violation) rep.first_violation = H2Violation{t, lam};
    }
  }
  rep.pass = !rep.first_violation;
  return rep;
}

WeylFit weyl_fit(const Spectrum& spec) {
  const auto& lam = spec.eigenvalues;
  require(lam.size() >= 50, ErrorCode::InvalidArgument, "need at least 50 eigenvalues");
  WeylFit fit;
  const std::size_t N = lam.size(), start = N / 2;
  const double p = 2.0 / spec.n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = start; i < N; ++i) {
    const double x = std::pow(static_cast<double>(i + 1), p);
    sxy += x * lam[i];
    sxx += x * x;
  }
  fit.fitted = N - start;
  fit.v = 0.5 * sxy / sxx;
  fit.two_v = 2.0 * fit.v;
  const double spread = lam.back() - lam[start];
  fit.degenerate = !(fit.v > 0.0) || spread <= 1e-12 * std::abs(lam.back());
  if (fit.degenerate) return fit;

  std::vector<double> rel;
  fit.two_sided_bound = true;
  for (std::size_t i = start; i < N; ++i) {
    const double x = std::pow(static_cast<double>(i + 1), p);
    rel.push_back(lam[i] / (2.0 * fit.v * x) - 1.0);
    if (lam[i] < fit.v * x || lam[i] > 4.0 * fit.v * x) fit.two_sided_bound = false;
  }
  fit.rms_relative_residual =
      std::sqrt(std::inner_product(rel.begin(), rel.end(), rel.begin(), 0.0) / static_cast<double>(rel.size()));
  const std::size_t len = rel.size() / 4;
  for (std::size_t b = 0; b < 4; ++b) {
    double acc = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += std::abs(rel[i]);
    fit.residual_blocks.push_back(acc / static_cast<double>(len));
  }
  fit.residual_decreasing = true;
  for (std::size_t b = 1; b < fit.residual_blocks.size(); ++b) {
    if (!(fit.residual_blocks[b] < fit.residual_blocks[b - 1])) fit.residual_decreasing = false;
  }
  return fit;
}

TrapReport trap_constancy(const std::vector<double>& t_grid, std::vector<TrapPath> paths,
                          const IntervalClusterSet& set, int s, int M, const TrapOptions& opts) {
  require(t_grid.size() >= 2, ErrorCode::InvalidArgument, "t-grid needs at least two points");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    require(t_grid[i] > t_grid[i - 1], ErrorCode::InvalidArgument, "t-grid must be increasing");
  }
  require(s >= 0, ErrorCode::InvalidArgument, "s must be nonnegative");
  const double floor_beta = std::max(2.0 * set.d, static_cast<double>(s));
  require(M > floor_beta, ErrorCode::InvalidArgument, fmt::format("need M > max(2d, s) = {}", floor_beta));
  const auto& I = set.intervals;
  require(!I.empty(), ErrorCode::InvalidArgument, "empty interval set");

  TrapReport rep;
  rep.beta = 0.5 * (floor_beta + M);
  auto fat = [&](std::size_t k) { return 0.5 * set.c * std::pow(I[k].a, -0.5 * rep.beta); };
  auto locate = [&](double lam) -> std::optional<std::size_t> {
    auto it = std::upper_bound(I.begin(), I.end(), lam, [](double v, const Interval& iv) { return v < iv.a; });
    // fattening can move λ just below a_k
    for (auto cand : {it, it == I.begin() ? it : it - 1}) {
      if (cand == I.end()) continue;
      const auto k = static_cast<std::size_t>(cand - I.begin());
      if (lam >= I[k].a - fat(k) && lam <= I[k].b + fat(k)) return k;
    }
    return std::nullopt;
  };

  std::sort(paths.begin(), paths.end(), [](const TrapPath& x, const TrapPath& y) { return x.mu0 < y.mu0; });
  double max_dt = 0.0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) max_dt = std::max(max_dt, t_grid[i] - t_grid[i - 1]);

  std::vector<double> Cq;
  for (std::size_t q = 0; q < paths.size(); ++q) {
    const auto& P = paths[q];
    require(P.mu.size() == t_grid.size(), ErrorCode::InvalidArgument, "path length differs from the t-grid");
    require(P.mu0 > 0.0, ErrorCode::InvalidArgument, "mu0 must be positive");
    const auto k0 = locate(P.mu[0] * P.mu[0]);
    if (!k0) {
      throw Error(ErrorCode::PathJumpsGap,
                  fmt::format("path mu0={:.17g} starts outside I at t={}", P.mu0, t_grid[0]), static_cast<long>(q));
    }
    const std::size_t k = *k0;
    double gap = std::numeric_limits<double>::infinity();
    if (k > 0) gap = std::min(gap, I[k].a - I[k - 1].b);
    if (k + 1 < I.size()) gap = std::min(gap, I[k + 1].a - I[k].b);

    double step = 0.0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
      const double dl = std::abs(P.mu[i] * P.mu[i] - P.mu[i - 1] * P.mu[i - 1]);
      if (opts.lipschitz > 0.0 && dl > opts.lipschitz * (t_grid[i] - t_grid[i - 1]) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::GridTooCoarse,
                    fmt::format("path mu0={:.17g} exceeds the Lipschitz budget near t={}", P.mu0, t_grid[i]),
                    static_cast<long>(q));
      }
      step = std::max(step, dl);
    }
    if (opts.lipschitz > 0.0) step = opts.lipschitz * max_dt;
    if (step >= 0.5 * gap) {
      throw Error(ErrorCode::GridTooCoarse,
                  fmt::format("path mu0={:.17g}: step bound {:.3g} vs half gap {:.3g}", P.mu0, step, 0.5 * gap),
                  static_cast<long>(q));
    }

    TrapRow row;
    row.mu0 = P.mu0;
    row.interval = k;
    double c_here = 0.0;
    const double scale = std::pow(P.mu0, s + 1);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double lam = P.mu[i] * P.mu[i];
      if (lam < I[k].a - fat(k) || lam > I[k].b + fat(k)) {
        throw Error(ErrorCode::PathJumpsGap,
                    fmt::format("path mu0={:.17g} leaves interval {} at t={:.17g}", P.mu0, k, t_grid[i]),
                    static_cast<long>(q));
      }
      row.drift = std::max(row.drift, scale * std::abs(P.mu[i] - P.mu[0]));
      c_here = std::max(c_here, scale * std::pow(I[k].a, -0.5 * s) / (P.mu[i] + P.mu[0]));
    }
    Cq.push_back(c_here);
    rep.rows.push_back(row);
  }
  rep.C = Cq.empty() ? 0.0 : *std::max_element(Cq.begin(), Cq.end());

  rep.epsilon_decreasing = true;
  for (std::size_t q = 0; q < rep.rows.size(); ++q) {
    auto& row = rep.rows[q];
    const auto& iv = I[row.interval];
    row.epsilon = rep.C * (std::pow(iv.a, 0.5 * s) * (iv.b - iv.a) + set.c * std::pow(iv.a, 0.5 * (s - rep.beta)));
    row.bound_ok = row.drift <= row.epsilon;
    if (q > 0 && row.epsilon > rep.rows[q - 1].epsilon) rep.epsilon_decreasing = false;
  }
  for (std::size_t q = rep.rows.size(); q-- > 0;) {
    if (!rep.rows[q].bound_ok) break;
    rep.empirical_q0 = q;
  }
  rep.consistent = rep.epsilon_decreasing && rep.empirical_q0 && *rep.empirical_q0 == 0;
  return rep;
}

void write_cluster_csv(std::ostream& out, const IntervalClusterSet& set) {
  out << "k,a_k,b_k,gap_margin,length\n";
  const auto& I = set.intervals;
  for (std::size_t k = 0; k < I.size(); ++k) {
    std::string margin;
    if (k + 1 < I.size()) margin = fmt::format("{:.17g}", I[k + 1].a - I[k].b - set.c * std::pow(I[k].b, -set.d));
    out << fmt::format("{},{:.17g},{:.17g},{},{:.17g}\n", k, I[k].a, I[k].b, margin, I[k].b - I[k].a);
  }
}

}  // namespace billiards
