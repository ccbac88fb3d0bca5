#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace billiards {

struct Spectrum {
  std::vector<double> eigenvalues;  // sorted, with multiplicity
  int n = 2;
};

Spectrum make_spectrum(std::vector<double> eigenvalues, int n);
// One eigenvalue per line; blank lines and '#' comments skipped.
Spectrum read_spectrum(std::istream& in, int n);
Spectrum read_spectrum_file(const std::string& path, int n);
void write_spectrum(std::ostream& out, const Spectrum& spec);

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct IntervalClusterSet {
  std::vector<Interval> intervals;  // shrunken [a_k, b_k]
  std::vector<Interval> raw;        // components [ā_k, b̄_k] of the fattened spectrum
  double c = 1.0;
  double d = 1.0;
  double alpha = 0.0;
  int n = 2;
};

IntervalClusterSet build_clusters(const Spectrum& spec, double c, double d, double alpha);

// Index of the interval containing x, if any.
std::optional<std::size_t> find_interval(const std::vector<Interval>& intervals, double x);

struct H1Report {
  double min_gap_margin = 0.0;  // min over k of a_{k+1} − b_k − c·b_k^{−d}
  std::optional<std::size_t> first_gap_violation;
  bool disjoint_increasing = true;
  double max_length = 0.0;
  std::vector<double> weighted_lengths;  // a_k^{s/2}(b_k − a_k)
  std::vector<double> tail_medians;
  bool tail_decreasing = false;
  bool s_in_guaranteed_range = true;  // 0 ≤ s < 2d − n
  bool pass = false;
};

H1Report verify_H1(const IntervalClusterSet& set, int s);

struct H2Violation {
  std::size_t t = 0;
  double lambda = 0.0;
};

struct H2Report {
  std::size_t checked = 0;
  std::optional<H2Violation> first_violation;
  bool pass = false;
};

// Eigenvalues beyond the last stored interval cannot be judged and are skipped.
H2Report verify_H2(const std::vector<Spectrum>& spectra, const IntervalClusterSet& set, double a);

struct WeylFit {
  double v = 0.0;
  double two_v = 0.0;
  std::size_t fitted = 0;                // points in the top half
  double rms_relative_residual = 0.0;
  std::vector<double> residual_blocks;   // mean |relative residual| over consecutive tail blocks
  bool residual_decreasing = false;
  bool two_sided_bound = false;          // v j^{2/n} ≤ λ_j ≤ 4v j^{2/n} on the tail
  bool degenerate = false;
};

WeylFit weyl_fit(const Spectrum& spec);

struct TrapPath {
  double mu0 = 0.0;
  std::vector<double> mu;  // μ_q(t) on the shared t-grid
};

struct TrapOptions {
  // Bound on |d(μ²)/dt|; zero means use the observed steps.
  double lipschitz = 0.0;
};

struct TrapRow {
  double mu0 = 0.0;
  std::size_t interval = 0;
  double epsilon = 0.0;
  double drift = 0.0;  // max_t (μ⁰)^{s+1}|μ(t) − μ(0)|
  bool bound_ok = false;
};

struct TrapReport {
  double beta = 0.0;
  double C = 0.0;
  std::vector<TrapRow> rows;  // in increasing μ⁰
  bool epsilon_decreasing = false;
  std::optional<std::size_t> empirical_q0;  // first row from which every later bound holds
  bool consistent = false;
};

TrapReport trap_constancy(const std::vector<double>& t_grid, std::vector<TrapPath> paths,
                          const IntervalClusterSet& set, int s, int M, const TrapOptions& opts = {});

void write_cluster_csv(std::ostream& out, const IntervalClusterSet& set);

}  // namespace billiards
