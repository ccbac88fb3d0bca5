#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "billiards/errors.hpp"
#include "billiards/tori.hpp"
#include "billiards/wiener.hpp"

using namespace billiards;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

TorusFunction random_real_poly(std::mt19937& rng, int max_k, bool zero_mean = true) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, max_k);
  TorusFunction f(1);
  const int top = deg(rng);
  for (int k = zero_mean ? 1 : 0; k <= top; ++k) {
    const std::complex<double> c(amp(rng), k == 0 ? 0.0 : amp(rng));
    f.set({k}, c);
    if (k != 0) f.set({-k}, std::conj(c));
  }
  return f;
}
}  // namespace

TEST_CASE("norm examples") {
  CHECK(wiener_norm(TorusFunction::cosine(2), 1.0) == doctest::Approx(3.0));
  for (int k : {-5, 0, 3}) {
    CHECK(wiener_norm(TorusFunction::mode(k), 2.5) == doctest::Approx(std::pow(1.0 + std::abs(k), 2.5)));
  }
  CHECK(TorusFunction::cosine(3).is_real());
  CHECK_FALSE(TorusFunction::mode(3).is_real());
}

TEST_CASE("Banach algebra inequality") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_real_poly(rng, 12, false);
    const auto v = random_real_poly(rng, 12, false);
    CHECK(wiener_norm(u * v, 2.0) <= wiener_norm(u, 2.0) * wiener_norm(v, 2.0) * (1 + 1e-14));
    // pointwise product agrees with evaluation
    const double phi = 0.37 * trial;
    CHECK(std::abs((u * v)(phi) - u(phi) * v(phi)) < 1e-10);
  }
}

TEST_CASE("homological equation examples") {
  const auto u = solve_homological(TorusFunction::mode(1), {kGolden}, 0.1, 1.0);
  CHECK(std::abs(u.coeff({1})) == doctest::Approx(0.5364620234501587).epsilon(1e-13));
  CHECK(std::abs(u.coeff({1})) == doctest::Approx(1.0 / (2.0 * std::abs(std::sin(kPi * kGolden)))).epsilon(1e-14));
  CHECK(solve_homological(TorusFunction(1), {kGolden}, 0.1, 1.0).coeffs().empty());
  try {
    solve_homological(TorusFunction::cosine(0), {kGolden}, 0.1, 1.0);
    FAIL("expected NonZeroMean");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonZeroMean);
  }
  try {
    solve_homological(TorusFunction::cosine(3), {1.0 / 3.0}, 0.1, 1.0);
    FAIL("expected ResonantMode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResonantMode);
    CHECK(std::string(e.what()).find("(-3)") != std::string::npos);
  }
}

TEST_CASE("L_omega examples") {
  const auto v = apply_Lomega(TorusFunction::mode(1), {0.5});
  CHECK(std::abs(v.coeff({1}) - std::complex<double>(-2.0, 0.0)) < 1e-15);
  CHECK(apply_Lomega(TorusFunction::cosine(0, 4.0), {kGolden}).coeffs().empty());
  // pointwise meaning: u(φ − 2πω) − u(φ)
  std::mt19937 rng(3);
  const auto u = random_real_poly(rng, 8);
  const auto Lu = apply_Lomega(u, {kGolden});
  for (double phi : {0.0, 1.1, 4.0}) {
    CHECK(std::abs(Lu(phi) - (u(phi - kTwoPi * kGolden) - u(phi))) < 1e-12);
  }
}

TEST_CASE("round trip, linearity, solution bound") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_real_poly(rng, 40);
    const auto w = diophantine_kappa({kGolden}, 1.0, f.max_order());
    const auto u = solve_homological(f, {kGolden}, w.kappa_hat, 1.0);
    CHECK(u.is_real(1e-13));
    CHECK(apply_Lomega(u, {kGolden}).max_abs_coeff_diff(f) < 1e-12);
    for (double s : {1.0, 2.0, 3.5}) {
      CHECK(wiener_norm(u, s - 1.0) <= wiener_norm(f, s) / (4.0 * w.kappa_hat));
    }
    const auto g = random_real_poly(rng, 40);
    const double kap = diophantine_kappa({kGolden}, 1.0, std::max(f.max_order(), g.max_order())).kappa_hat;
    const auto lhs = solve_homological(f * 2.0 + g, {kGolden}, kap, 1.0);
    const auto rhs = solve_homological(f, {kGolden}, kap, 1.0) * 2.0 + solve_homological(g, {kGolden}, kap, 1.0);
    CHECK(lhs.max_abs_coeff_diff(rhs) < 1e-12);
  }
}

TEST_CASE("equivariance under rotation") {
  std::mt19937 rng(11);
  const auto f = random_real_poly(rng, 10);
  const double a = 0.8;
  TorusFunction fa(1);  // f(φ + a)
  for (const auto& [k, v] : f.coeffs()) fa.set(k, v * std::polar(1.0, k[0] * a));
  const auto u = solve_homological(f, {kGolden}, 0.01, 1.0);
  const auto ua = solve_homological(fa, {kGolden}, 0.01, 1.0);
  for (double phi : {0.2, 2.0}) CHECK(std::abs(ua(phi) - u(phi + a)) < 1e-12);
}

TEST_CASE("loss of regularity is sharp on continued-fraction denominators") {
  const double kap = diophantine_kappa({kGolden}, 1.0, 1000).kappa_hat;
  for (int q : {55, 89, 144, 233, 377}) {
    auto f = TorusFunction::cosine(q);
    const auto u = solve_homological(f, {kGolden}, kap, 1.0);
    const double ratio = wiener_norm(u, 1.0) / wiener_norm(f, 2.0);
    CHECK(ratio <= 1.0 / (4.0 * kap));
    CHECK(ratio >= 1.0 / (16.0 * kap));
  }
}

TEST_CASE("two-dimensional torus") {
  TorusFunction f(2);
  f.set({1, -2}, {0.5, 0.1});
  f.set({-1, 2}, {0.5, -0.1});
  f.set({3, 1}, {0.2, 0.0});
  f.set({-3, -1}, {0.2, 0.0});
  const std::vector<double> om = {kGolden, std::sqrt(2.0) - 1.0};
  const auto w = diophantine_kappa(om, 1.5, f.max_order());
  const auto u = solve_homological(f, om, w.kappa_hat, 1.5);
  CHECK(apply_Lomega(u, om).max_abs_coeff_diff(f) < 1e-12);
  const auto rep = derivative_sup_bound_check(u, 2, 4096);
  CHECK(rep.holds);
}

TEST_CASE("sup-norm embedding") {
  auto rep = derivative_sup_bound_check(TorusFunction::cosine(2), 1);
  CHECK(rep.sup_derivative[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.norm == doctest::Approx(3.0));
  CHECK(rep.holds);
  rep = derivative_sup_bound_check(TorusFunction::mode(-4), 3);
  CHECK(rep.sup_derivative[3] == doctest::Approx(64.0));
  CHECK(rep.norm == doctest::Approx(125.0));
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) CHECK(derivative_sup_bound_check(random_real_poly(rng, 15), 3).holds);
}

TEST_CASE("coefficient file round trip") {
  std::mt19937 rng(9);
  const auto f = random_real_poly(rng, 6);
  std::stringstream ss;
  write_coefficients(ss, f);
  const auto g = read_coefficients(ss, 1);
  CHECK(g.max_abs_coeff_diff(f) == 0.0);
  std::istringstream bad("1 0.5\n");
  CHECK_THROWS_AS(read_coefficients(bad, 1), Error);
  std::istringstream commented("# header\n\n2 1 0\n-2 1 0 # cos\n");
  CHECK(read_coefficients(commented, 1).max_abs_coeff_diff(TorusFunction::cosine(2, 2.0)) == 0.0);
}
