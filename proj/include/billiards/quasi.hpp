#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "billiards/tori.hpp"

namespace billiards {

// Normal-form data of one invariant circle (two-dimensional tables, one action).
struct BirkhoffData {
  double I0 = 0.0;
  double omega = 0.0;  // un-reduced, gradL / 2π
  double L0 = 0.0;
  // Taylor jet of L at I0 beyond the gradient: L_jet[0] = L'', L_jet[1] = L''', …
  std::vector<double> L_jet;
  int maslov_theta0 = 0;
  int maslov_theta = 0;
  // p⁰_{j,a}: coefficient of δ^a μ^{−j} inside the logarithm, j + a ≤ M − 1
  std::map<std::pair<int, int>, std::complex<double>> birkhoff_p;

  double D() const;
  double gradL() const { return kTwoPi * omega; }
  // highest order k with L^(k)(I0) available
  int jet_order() const { return 1 + static_cast<int>(L_jet.size()); }
};

// Disk of radius 1, circle of angle θ: I0 = cos θ, L(I) = 2(√(1−I²) − I arccos I),
// jet to order jet_order.
BirkhoffData disk_birkhoff_data(double theta, int jet_order = 3);

BirkhoffData birkhoff_data_from(const ActionData& action, std::vector<double> extra_jet = {});

struct QuantumIndex {
  long k = 0;
  long kn = 0;
  double mu0 = 0.0;
};

struct IndexSearch {
  std::vector<QuantumIndex> indices;
  double min_mu0_over_q = 0.0;  // witnessed lower bound μ⁰/|q| over the accepted set
};

IndexSearch find_indices(const BirkhoffData& data, double d_n, long k_min, long k_max);

struct QuasiEigenvalue {
  QuantumIndex q;
  int M = 0;
  std::vector<double> c;  // c_0..c_M
  std::vector<double> b;  // b_0..b_{M+1}
  std::vector<std::complex<double>> c_complex;
  std::vector<std::complex<double>> b_complex;
  double imag_defect = 0.0;  // largest imaginary part discarded from c and b
  double W0 = 0.0;
  double V0 = 0.0;
};

// Order-by-order solution of the two quantization conditions in ε = 1/μ⁰.
QuasiEigenvalue solve_recursion(const BirkhoffData& data, const QuantumIndex& q, int M);
// Same with an explicit seed (W_0, V_0).
QuasiEigenvalue solve_recursion_seeded(const BirkhoffData& data, double W0, double V0, double mu0, int M);

// μ = μ⁰ + c_0 + c_1 ε + … + c_M ε^M; overrides replace c_j by index.
std::pair<double, double> evaluate_mu(const QuasiEigenvalue& qe, const std::map<int, double>& overrides = {});

struct EbkRow {
  int m = 0;
  int p = 1;
  double mu = 0.0;
  double theta = 0.0;
  double bessel_zero = 0.0;
  double rel_error = 0.0;
};

// Disk whispering-gallery quantization μ cos θ = m + ϑ₀/4, 2μ(sin θ − θ cos θ) = 2πp − πϑ/2.
EbkRow disk_ebk(int m, int p, int theta0, int theta);
std::vector<EbkRow> disk_ebk_compare(const std::vector<int>& ms, int p, int theta0, int theta);

// Integer Maslov pair (ϑ₀ mod 4, ϑ mod 4) minimizing the worst relative error
// against j_{m,1}, m in [m_lo, m_hi].
std::pair<int, int> calibrate_disk_maslov(int m_lo = 20, int m_hi = 40);

// Frozen result of calibrate_disk_maslov.
inline constexpr std::pair<int, int> kDiskMaslov{0, 1};

void write_quasi_csv_header(std::ostream& out);
void write_quasi_csv_row(std::ostream& out, const QuasiEigenvalue& qe);

}  // namespace billiards
