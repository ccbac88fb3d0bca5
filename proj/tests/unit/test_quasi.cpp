#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "billiards/bessel.hpp"
#include "billiards/errors.hpp"
#include "billiards/quasi.hpp"

using namespace billiards;

namespace {
// symbolic ε-expansion of the quantization system, disk θ = π/3, seed (0.2, 0.3)
// (tests/oracles/recursion_oracle.py)
const double kZeroP_c[] = {0.41504499598811678, -3.7725317380408313e-05, 1.5909960755752522e-05};
const double kZeroP_b[] = {-0.0075224979940583881, 0.0031410378084547842, -0.0013119107936108347};
const std::complex<double> kWithP_c[] = {{0.41504499598811678, 0.0},
                                         {0.80825265154809567, 0.0},
                                         {-0.45368166038703805, 0.56580326380583323}};
const std::complex<double> kWithP_b[] = {{-0.0075224979940583881, 0.0},
                                         {-0.40100415062428324, 0.0},
                                         {0.39935567523055576, -0.28290163190291662}};
}  // namespace

TEST_CASE("disk Birkhoff data") {
  const auto d = disk_birkhoff_data(kPi / 3.0);
  CHECK(d.I0 == doctest::Approx(0.5));
  CHECK(d.L0 == doctest::Approx(std::sqrt(3.0) - kPi / 3.0).epsilon(1e-15));
  CHECK(d.gradL() == doctest::Approx(-2.0 * kPi / 3.0));
  CHECK(d.L_jet.at(0) == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(d.L_jet.at(1) == doctest::Approx(8.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-15));
  CHECK(d.D() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // fourth derivative of L by finite differences of the closed form L''' = 2I(1−I²)^{−3/2}
  const auto d5 = disk_birkhoff_data(1.1, 5);
  auto L3 = [](double I) { return 2.0 * I * std::pow(1.0 - I * I, -1.5); };
  const double I = std::cos(1.1), h = 1e-4;
  CHECK(d5.L_jet.at(2) == doctest::Approx((L3(I + h) - L3(I - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("index search") {
  auto d = disk_birkhoff_data(kPi / 3.0);
  auto found = find_indices(d, 4.0, 100, 100);
  REQUIRE(found.indices.size() == 1);
  CHECK(found.indices[0].mu0 == doctest::Approx(200.0));
  CHECK(found.indices[0].kn == 22);
  CHECK(std::abs(kTwoPi * 22 - 200.0 * d.L0) == doctest::Approx(1.2594254834949652).epsilon(1e-12));
  found = find_indices(d, 4.0, 1, 2000);
  CHECK(found.indices.size() == 2000);  // 2d_n exceeds the 2π period
  CHECK(found.min_mu0_over_q > 0.0);
  CHECK(find_indices(d, 0.0, 1, 5000).indices.empty());
  d.I0 = 0.0;
  CHECK_THROWS_AS(find_indices(d, 4.0, 1, 10), Error);
}

TEST_CASE("Maslov shift by 4 is absorbed by k_n") {
  auto d = disk_birkhoff_data(0.9);
  d.maslov_theta = 1;
  auto e = d;
  e.maslov_theta = 5;
  const auto a = find_indices(d, 4.0, 10, 60).indices;
  const auto b = find_indices(e, 4.0, 10, 60).indices;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].kn == a[i].kn + 1);
    const auto qa = solve_recursion(d, a[i], 1);
    const auto qb = solve_recursion(e, b[i], 1);
    CHECK(evaluate_mu(qb).first == doctest::Approx(evaluate_mu(qa).first).epsilon(1e-13));
  }
}

TEST_CASE("zero seed propagates") {
  const auto d = disk_birkhoff_data(kPi / 3.0);
  const auto q = solve_recursion_seeded(d, 0.0, 0.0, 200.0, 2);
  for (double v : q.c) CHECK(v == 0.0);
  for (double v : q.b) CHECK(v == 0.0);
}

TEST_CASE("recursion matches the symbolic oracle") {
  auto d = disk_birkhoff_data(kPi / 3.0);
  auto q = solve_recursion_seeded(d, 0.2, 0.3, 100.0, 2);
  for (int j = 0; j < 3; ++j) {
    CHECK(q.c[j] == doctest::Approx(kZeroP_c[j]).epsilon(1e-12));
    CHECK(q.b[j] == doctest::Approx(kZeroP_b[j]).epsilon(1e-12));
  }
  CHECK(q.imag_defect < 1e-15);
  d.birkhoff_p[{0, 0}] = {0.0, -1.4};
  d.birkhoff_p[{0, 1}] = {0.0, 0.3};
  d.birkhoff_p[{1, 0}] = {0.0, 0.2};
  q = solve_recursion_seeded(d, 0.2, 0.3, 100.0, 2);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(q.c_complex[j] - kWithP_c[j]) < 1e-12);
    CHECK(std::abs(q.b_complex[j] - kWithP_b[j]) < 1e-12);
  }
  CHECK(q.imag_defect == doctest::Approx(0.56580326380583323));
  // first-order system: W_1 = −c_0 b_0
  const double D = d.D();
  const double W1 = -q.c[0] * q.b[0];
  CHECK(q.b[1] == doctest::Approx(W1 - q.c[1] * d.I0).epsilon(1e-13));
  (void)D;
}

TEST_CASE("c1 responds to the invariant with slope 2/D") {
  auto d = disk_birkhoff_data(kPi / 3.0);
  const double D = d.D();
  const auto base = solve_recursion_seeded(d, 0.2, 0.3, 50.0, 1);
  for (int i = 0; i < 10; ++i) {
    const double R = -1.0 + 0.37 * i;
    d.birkhoff_p[{0, 0}] = {0.0, -2.0 * R};
    const auto q = solve_recursion_seeded(d, 0.2, 0.3, 50.0, 1);
    CHECK(q.c[1] - base.c[1] == doctest::Approx(2.0 * R / D).epsilon(1e-12));
    CHECK(q.c[0] == base.c[0]);
    CHECK(q.b[0] == base.b[0]);
  }
  // zero seed: c1 = 2R/D exactly
  d.birkhoff_p[{0, 0}] = {0.0, -2.0 * 0.75};
  CHECK(solve_recursion_seeded(d, 0.0, 0.0, 50.0, 1).c[1] == doctest::Approx(1.5 / D).epsilon(1e-14));
}

TEST_CASE("jets and D are enforced") {
  auto d = disk_birkhoff_data(kPi / 3.0, 2);
  CHECK_NOTHROW(solve_recursion_seeded(d, 0.1, 0.1, 10.0, 1));
  try {
    solve_recursion_seeded(d, 0.1, 0.1, 10.0, 2);
    FAIL("expected MissingJet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingJet);
  }
  d.L0 = -2.0;
  CHECK_THROWS_AS(solve_recursion_seeded(d, 0.1, 0.1, 10.0, 1), Error);
}

TEST_CASE("evaluate_mu") {
  QuasiEigenvalue qe;
  qe.q.mu0 = 200.0;
  qe.c = {0.1, 2.0};
  CHECK(evaluate_mu(qe).first == doctest::Approx(200.11).epsilon(1e-15));
  CHECK(evaluate_mu(qe).second == doctest::Approx(200.11 * 200.11).epsilon(1e-15));
  CHECK(evaluate_mu(qe, {{1, 2.5}}).first - evaluate_mu(qe).first == doctest::Approx(0.5 / 200.0).epsilon(1e-10));
  qe.c = {0.0, 0.0};
  CHECK(evaluate_mu(qe).first == 200.0);
  // continuity of μ² along a smooth path of c1
  double prev = evaluate_mu(qe, {{1, 0.0}}).second;
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.01 * i;
    const double cur = evaluate_mu(qe, {{1, std::sin(3 * t)}}).second;
    CHECK(std::abs(cur - prev) <= 2.0 * 3.0 * 0.01 * (1.0 + 1.0 / 200.0) * 1.001);
    prev = cur;
  }
}

TEST_CASE("Bessel zeros against Boost") {
  CHECK(bessel_j_zero(50, 1) == doctest::Approx(57.116899160119175).epsilon(1e-13));
  CHECK(bessel_j_zero(80, 1) == doctest::Approx(88.235878601254655).epsilon(1e-13));
  for (int m : {0, 1, 7, 33}) {
    const auto z = bessel_j_zeros(m, 5);
    for (int p = 1; p <= 5; ++p) {
      CHECK(z[p - 1] == doctest::Approx(boost::math::cyl_bessel_j_zero(double(m), p)).epsilon(1e-13));
    }
  }
  const auto ev = disk_dirichlet_eigenvalues(100.0);
  CHECK(ev.front() == doctest::Approx(std::pow(2.404825557695773, 2)).epsilon(1e-13));
  CHECK(ev[1] == ev[2]);  // j_{1,1}² twice
  CHECK(ev.back() <= 100.0);
}

TEST_CASE("disk EBK") {
  CHECK(calibrate_disk_maslov(20, 40) == kDiskMaslov);
  std::vector<int> ms;
  for (int m = 50; m <= 80; m += 5) ms.push_back(m);
  const auto rows = disk_ebk_compare(ms, 1, kDiskMaslov.first, kDiskMaslov.second);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].rel_error < 1e-3);
    if (i > 0) CHECK(rows[i].rel_error < rows[i - 1].rel_error);
  }
  // the EBK angle sits on a circle whose leading recursion data reproduce μ
  const auto row = disk_ebk(60, 1, 0, 1);
  auto d = disk_birkhoff_data(row.theta);
  d.maslov_theta = 1;
  const auto found = find_indices(d, 1e-6, 60, 60);
  REQUIRE(found.indices.size() == 1);
  const auto q = solve_recursion(d, found.indices[0], 1);
  CHECK(evaluate_mu(q).first == doctest::Approx(row.mu).epsilon(1e-9));
}

TEST_CASE("quasi csv row") {
  const auto d = disk_birkhoff_data(kPi / 3.0);
  const auto q = solve_recursion(d, find_indices(d, 4.0, 100, 100).indices.at(0), 2);
  std::ostringstream os;
  write_quasi_csv_header(os);
  write_quasi_csv_row(os, q);
  INFO(os.str());
  CHECK(os.str().rfind("k,k_n,mu0,c0,c1,c2,mu,mu_squared\n100,22,", 0) == 0);
}
