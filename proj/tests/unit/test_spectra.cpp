#include <doctest.h>

#include <cmath>
#include <sstream>

#include "billiards/bessel.hpp"
#include "billiards/errors.hpp"
#include "billiards/quasi.hpp"
#include "billiards/spectra.hpp"

using namespace billiards;

namespace {

Spectrum squares(int count) {
  std::vector<double> v;
  for (int j = 1; j <= count; ++j) v.push_back(double(j) * j);
  return make_spectrum(v, 1);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

// Whispering-gallery quasi-eigenvalue paths on the disk circle θ = π/3 with
// c_j(t) = c_j(0) + amp·sin(πt) for the chosen order.
struct Family {
  std::vector<double> t;
  std::vector<TrapPath> paths;
  IntervalClusterSet set;
};

Family disk_family(int order, double amp, double half_width_coeff) {
  const auto d = disk_birkhoff_data(kPi / 3.0);
  Family f;
  for (int i = 0; i <= 200; ++i) f.t.push_back(i / 200.0);
  f.set.c = 1.0;
  f.set.d = 1.2;
  f.set.n = 2;
  for (const auto& q : find_indices(d, 4.0, 20, 60).indices) {
    const auto qe = solve_recursion(d, q, 2);
    TrapPath p{q.mu0, {}};
    for (double t : f.t) p.mu.push_back(evaluate_mu(qe, {{order, qe.c[order] + amp * std::sin(kPi * t)}}).first);
    const double lam = p.mu[0] * p.mu[0], hw = half_width_coeff / q.mu0;
    f.set.intervals.push_back({lam - hw, lam + hw});
    f.paths.push_back(std::move(p));
  }
  return f;
}

}  // namespace

TEST_CASE("cluster endpoints for squares") {
  const auto set = build_clusters(squares(400), 1.0, 1.0, 50.0);
  const auto k = find_interval(set.intervals, 100.0);
  REQUIRE(k);
  // λ ∓ 2/λ = 100 solved in 30-digit arithmetic
  CHECK(set.raw[*k].a == doctest::Approx(99.979995998399199552).epsilon(1e-15));
  CHECK(set.raw[*k].b == doctest::Approx(100.01999600159920045).epsilon(1e-15));
  CHECK(set.intervals[*k].a == doctest::Approx(99.994998999599799888).epsilon(1e-15));
  CHECK(set.intervals[*k].b == doctest::Approx(100.00499900039980011).epsilon(1e-15));
  CHECK(set.intervals.front().a > 50.0);
  CHECK(set.intervals.size() == 400 - 7);
}

TEST_CASE("cluster soundness and shrink positivity") {
  const auto spec = make_spectrum(disk_dirichlet_eigenvalues(1600.0), 2);
  const auto set = build_clusters(spec, 1.0, 1.2, 10.0);
  for (std::size_t k = 0; k < set.intervals.size(); ++k) {
    const auto& raw = set.raw[k];
    const auto& iv = set.intervals[k];
    CHECK(iv.b - iv.a >= 0.5 * (std::pow(raw.a, -1.2) + std::pow(raw.b, -1.2)) - 1e-12 * raw.b);
  }
  for (double lam : spec.eigenvalues) {
    if (lam < 11.0) continue;
    int hits = 0;
    for (const auto& raw : set.raw) hits += (lam >= raw.a && lam <= raw.b);
    CHECK(hits == 1);
    const auto k = find_interval(set.intervals, lam);
    REQUIRE(k);
  }
}

TEST_CASE("H1 on squares and the disk spectrum") {
  auto set = build_clusters(squares(400), 1.0, 1.0, 50.0);
  auto rep = verify_H1(set, 0);
  CHECK(rep.pass);
  CHECK(rep.min_gap_margin > 0.0);
  CHECK(rep.s_in_guaranteed_range);
  // 2d − n = 1: s = 1 is outside the guaranteed range but still checked
  rep = verify_H1(set, 1);
  CHECK_FALSE(rep.s_in_guaranteed_range);
  CHECK(rep.pass);

  const auto disk = build_clusters(make_spectrum(disk_dirichlet_eigenvalues(3600.0), 2), 1.0, 1.2, 10.0);
  rep = verify_H1(disk, 0);
  CHECK(rep.pass);
  CHECK(rep.disjoint_increasing);
  CHECK(rep.s_in_guaranteed_range);

  set.intervals[5].b += set.intervals[6].a - set.intervals[5].b;
  rep = verify_H1(set, 0);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_gap_violation);
  CHECK(*rep.first_gap_violation == 5);
}

TEST_CASE("cluster errors") {
  CHECK(code_of([] { build_clusters(squares(5), 1.0, 1.0, 50.0); }) == ErrorCode::EmptySpectrumAboveAlpha);
  CHECK(code_of([] { build_clusters(make_spectrum({10, 20, 30}, 2), 1.0, 1.0, 5.0); }) == ErrorCode::DTooSmall);
  CHECK(code_of([] { verify_H1(build_clusters(squares(12), 1.0, 1.0, 50.0), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("H2 coverage") {
  const auto base = squares(400);
  const auto set = build_clusters(base, 1.0, 1.0, 50.0);
  CHECK(verify_H2({base, base, base}, set, 51.0).pass);

  auto shifted = base;
  shifted.eigenvalues[20] = 0.5 * (set.intervals[12].b + set.intervals[13].a);
  const auto rep = verify_H2({base, shifted}, set, 51.0);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_violation);
  CHECK(rep.first_violation->t == 1);
  CHECK(rep.first_violation->lambda == shifted.eigenvalues[20]);

  auto nudged = base;
  for (std::size_t j = 0; j < nudged.eigenvalues.size(); ++j) {
    const double lam = nudged.eigenvalues[j];
    nudged.eigenvalues[j] += (j % 2 ? 0.4 : -0.4) * std::pow(lam, -1.0);
  }
  CHECK(verify_H2({nudged}, set, 51.0).pass);
}

TEST_CASE("Weyl fit") {
  auto fit = weyl_fit(squares(200));
  CHECK(fit.v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.two_sided_bound);

  fit = weyl_fit(make_spectrum(disk_dirichlet_eigenvalues(3600.0), 2));
  CHECK(fit.two_v >= 3.5);
  CHECK(fit.two_v <= 4.5);
  CHECK(fit.two_sided_bound);
  CHECK_FALSE(fit.degenerate);

  CHECK(weyl_fit(make_spectrum(std::vector<double>(60, 7.0), 2)).degenerate);
  CHECK(code_of([] { weyl_fit(squares(10)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("trap: constant midpoint paths") {
  const auto set = build_clusters(squares(400), 1.0, 1.0, 50.0);
  std::vector<double> t{0.0, 0.5, 1.0};
  std::vector<TrapPath> paths;
  for (std::size_t k = 10; k < 300; k += 10) {
    const double mid = std::sqrt(0.5 * (set.intervals[k].a + set.intervals[k].b));
    paths.push_back({mid, {mid, mid, mid}});
  }
  const auto rep = trap_constancy(t, paths, set, 0, 3);
  CHECK(rep.beta == doctest::Approx(2.5));
  CHECK(rep.consistent);
  for (const auto& row : rep.rows) CHECK(row.drift == 0.0);
}

TEST_CASE("trap: bounded c2 variation with constant c1") {
  const auto f = disk_family(2, 0.3, 1.2);
  const auto rep = trap_constancy(f.t, f.paths, f.set, 0, 3);
  CHECK(rep.consistent);
  REQUIRE(rep.empirical_q0);
  CHECK(*rep.empirical_q0 == 0);
  for (const auto& row : rep.rows) CHECK(row.drift > 0.0);
  CHECK(rep.rows.back().drift < rep.rows.front().drift);

  // enlarging the intervals keeps the verdict
  auto wide = f.set;
  for (auto& iv : wide.intervals) {
    const double mid = 0.5 * (iv.a + iv.b), hw = 0.5 * (iv.b - iv.a);
    iv = {mid - 2 * hw, mid + 2 * hw};
  }
  CHECK(trap_constancy(f.t, f.paths, wide, 0, 3).consistent);
}

TEST_CASE("trap: drifting c1 is flagged") {
  const auto f = disk_family(1, 0.5, 1.2);
  try {
    trap_constancy(f.t, f.paths, f.set, 0, 3);
    FAIL("drift not flagged");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathJumpsGap);
    REQUIRE(e.index());
  }
}

TEST_CASE("trap: grid and parameter checks") {
  const auto f = disk_family(2, 0.3, 1.2);
  CHECK(code_of([&] { trap_constancy(f.t, f.paths, f.set, 0, 2); }) == ErrorCode::InvalidArgument);
  TrapOptions tight;
  tight.lipschitz = 1e-6;
  CHECK(code_of([&] { trap_constancy(f.t, f.paths, f.set, 0, 3, tight); }) == ErrorCode::GridTooCoarse);
  TrapOptions loose;
  loose.lipschitz = 1e9;
  CHECK(code_of([&] { trap_constancy(f.t, f.paths, f.set, 0, 3, loose); }) == ErrorCode::GridTooCoarse);
}

TEST_CASE("spectrum and cluster io") {
  std::istringstream in("# disk\n4.0\n\n1.0  # first\n9\n");
  const auto spec = read_spectrum(in, 2);
  CHECK(spec.eigenvalues == std::vector<double>{1.0, 4.0, 9.0});
  std::istringstream bad("1.0 2.0\n");
  CHECK(code_of([&] { read_spectrum(bad, 2); }) == ErrorCode::ConfigError);
  std::ostringstream out;
  write_cluster_csv(out, build_clusters(squares(20), 1.0, 1.0, 50.0));
  CHECK(out.str().rfind("k,a_k,b_k,gap_margin,length\n0,", 0) == 0);
}

TEST_CASE("shipped disk spectrum agrees with the Bessel zeros") {
  const auto file = read_spectrum_file(std::string(BILLIARDS_DATA_DIR) + "/disk_dirichlet.txt", 2);
  const auto ours = disk_dirichlet_eigenvalues(3600.0);
  REQUIRE(file.eigenvalues.size() == ours.size());
  CHECK(file.eigenvalues.size() == 871);
  for (std::size_t i = 0; i < ours.size(); ++i) CHECK(ours[i] == doctest::Approx(file.eigenvalues[i]).epsilon(1e-13));
}
