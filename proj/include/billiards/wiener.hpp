#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <vector>

namespace billiards {

using LatticeIndex = std::vector<int>;

// Trigonometric polynomial on T^d with finitely many nonzero coefficients u_k.
class TorusFunction {
 public:
  using Coeffs = std::map<LatticeIndex, std::complex<double>>;

  explicit TorusFunction(int dim = 1) : dim_(dim) {}
  TorusFunction(int dim, Coeffs coeffs);

  // a·e^{ikφ} in one variable
  static TorusFunction mode(int k, std::complex<double> amplitude = 1.0);
  // cos(kφ) in one variable
  static TorusFunction cosine(int k, double amplitude = 1.0);

  int dim() const { return dim_; }
  const Coeffs& coeffs() const { return coeffs_; }
  std::complex<double> coeff(const LatticeIndex& k) const;
  void set(const LatticeIndex& k, std::complex<double> value);
  void add(const LatticeIndex& k, std::complex<double> value);

  // max Σ|k_j| over the support; 0 for the empty function
  int max_order() const;
  bool is_real(double tol = 1e-14) const;

  std::complex<double> operator()(const std::vector<double>& phi) const;
  std::complex<double> operator()(double phi) const { return (*this)(std::vector<double>{phi}); }

  TorusFunction operator+(const TorusFunction& o) const;
  TorusFunction operator-(const TorusFunction& o) const;
  TorusFunction operator*(std::complex<double> a) const;
  TorusFunction operator*(const TorusFunction& o) const;  // pointwise product

  double max_abs_coeff_diff(const TorusFunction& o) const;

 private:
  int dim_;
  Coeffs coeffs_;
};

int lattice_norm(const LatticeIndex& k);

// ‖u‖_s = Σ (1+|k|)^s |u_k|
double wiener_norm(const TorusFunction& u, double s);

// L_ω u(φ) = u(φ − 2πω) − u(φ), i.e. u_k ↦ u_k (e^{−2πi⟨k,ω⟩} − 1).
TorusFunction apply_Lomega(const TorusFunction& u, const std::vector<double>& omega);

// Unique zero-mean solution of L_ω u = f. kappa is the Diophantine constant
// the caller vouches for; modes with |⟨k,ω⟩ − n| < kappa |k|^{−τ} are rejected
// as resonant.
TorusFunction solve_homological(const TorusFunction& f, const std::vector<double>& omega, double kappa,
                                double tau);

struct SupBoundReport {
  std::vector<double> sup_derivative;  // sup |∂^α u| maximized over |α| = j, j = 0..s
  double norm = 0.0;                   // ‖u‖_s
  bool holds = true;
};

SupBoundReport derivative_sup_bound_check(const TorusFunction& u, int s, int grid = 4096);

// Lines "k_1 … k_d re im"; blank lines and '#' comments are skipped.
TorusFunction read_coefficients(std::istream& in, int dim);
void write_coefficients(std::ostream& out, const TorusFunction& u);

}  // namespace billiards
