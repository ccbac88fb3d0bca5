#include "billiards/rigidity.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "billiards/billiard.hpp"
#include "billiards/errors.hpp"
#include "billiards/radon.hpp"
#include "billiards/tori.hpp"

namespace billiards {

std::vector<std::function<double(double)>> cosine_basis(int J) {
  require(J >= 1, ErrorCode::InvalidArgument, "basis size must be positive");
  std::vector<std::function<double(double)>> out;
  for (int j = 0; j < J; ++j) out.push_back([j](double x) { return std::cos(2.0 * j * x); });
  return out;
}

namespace {

void check_h_grid(const LiouvilleTable& table, const std::vector<double>& h_grid, bool strict) {
  require(!h_grid.empty(), ErrorCode::InvalidArgument, "empty h-grid");
  const double qN = table.qN();
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > qN && h_grid[i] < 0.0)) {
      throw Error(ErrorCode::HOutOfRange, fmt::format("h={} outside ({}, 0)", h_grid[i], qN), static_cast<long>(i));
    }
    if (strict && i > 0 && !(h_grid[i] > h_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "h-grid must be strictly increasing", static_cast<long>(i));
    }
  }
}

}  // namespace

Eigen::VectorXd radon_profile(const LiouvilleTable& table, const std::vector<double>& h_grid,
                              const std::function<double(double)>& Kx) {
  check_h_grid(table, h_grid, false);
  Eigen::VectorXd out(static_cast<Eigen::Index>(h_grid.size()));
  for (std::size_t i = 0; i < h_grid.size(); ++i) out[static_cast<Eigen::Index>(i)] = liouville_radon(table, Kx, h_grid[i]).R_plus;
  return out;
}

RadonMatrix radon_matrix(const LiouvilleTable& table, const std::vector<double>& h_grid, int J,
                         std::vector<std::function<double(double)>> basis) {
  check_h_grid(table, h_grid, true);
  if (basis.empty()) basis = cosine_basis(J);
  require(static_cast<int>(basis.size()) == J, ErrorCode::InvalidArgument, "basis size differs from J");
  require(J <= static_cast<int>(h_grid.size()), ErrorCode::InvalidArgument, "need J ≤ number of h values");
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < 64; ++i) {
      const double x = kTwoPi * (i + 0.37) / 64;
      const double v = basis[j](x);
      if (std::abs(v - basis[j](-x)) > 1e-12 || std::abs(v - basis[j](kPi - x)) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "basis function is not invariant under x ↦ −x and x ↦ π − x", j);
      }
    }
  }
  RadonMatrix m;
  m.h_grid = h_grid;
  m.entries.resize(static_cast<Eigen::Index>(h_grid.size()), J);
  for (int j = 0; j < J; ++j) m.entries.col(j) = radon_profile(table, h_grid, basis[j]);
  m.basis = std::move(basis);
  for (Eigen::Index i = 0; i < m.entries.size(); ++i) {
    require(std::isfinite(m.entries.data()[i]), ErrorCode::QuadratureFailure, "non-finite Radon matrix entry");
  }
  m.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(m.entries).singularValues();
  return m;
}

Reconstruction invert_radon(const RadonMatrix& matrix, const Eigen::VectorXd& data, double reg, int min_rank) {
  require(data.size() == matrix.entries.rows(), ErrorCode::InvalidArgument, "data length differs from the h-grid");
  require(reg >= 0.0, ErrorCode::InvalidArgument, "truncation parameter must be nonnegative");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = reg * (sv.size() ? sv[0] : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv[rank] > 0.0 && sv[rank] >= cut) ++rank;
  if (rank < min_rank || rank == 0) {
    throw Error(ErrorCode::RankDeficient, fmt::format("effective rank {} below {}", rank, std::max(min_rank, 1)));
  }
  Reconstruction r;
  const Eigen::VectorXd proj = svd.matrixU().leftCols(rank).transpose() * data;
  r.coefficients = svd.matrixV().leftCols(rank) * proj.cwiseQuotient(sv.head(rank));
  const double dn = data.norm();
  const double res = (matrix.entries * r.coefficients - data).norm();
  r.residual = dn > 0.0 ? res / dn : res;
  r.effective_rank = rank;
  r.singular_values = sv;
  return r;
}

RotationProfile rotation_profile(const LiouvilleTable& table, const std::vector<double>& h_grid, int bounces) {
  check_h_grid(table, h_grid, false);
  const auto curve = table.boundary_curve();
  const double x0 = curve.param_at(0.0);
  const double f0 = table.f(0, x0), qN = table.qN();
  RotationOptions opt;
  if (curve.semi_axes()) {
    opt.conserved = [&](PhasePoint p) { return ellipse_first_integral(curve, p); };
    opt.conserved_tol = 1e-9;
  }
  RotationProfile prof;
  for (double h : h_grid) {
    // level set f − ξ²(f − q(N)) = h at the starting point
    const double xi = std::sqrt((f0 - h) / (f0 - qN));
    const auto orb = orbit(curve, {0.0, xi}, bounces - 1).states;
    prof.points.emplace_back(h, rotation_number(orb, curve.total_length(), opt).omega);
  }
  prof.strictly_increasing = true;
  for (std::size_t i = 1; i < prof.points.size(); ++i) {
    const bool up = prof.points[i].first > prof.points[i - 1].first;
    if (!up || !(prof.points[i].second > prof.points[i - 1].second)) prof.strictly_increasing = false;
  }
  return prof;
}

void write_matrix_csv(std::ostream& out, const RadonMatrix& m) {
  out << "h";
  for (Eigen::Index j = 0; j < m.entries.cols(); ++j) out << ",basis_" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    out << fmt::format("{:.17g}", m.h_grid[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) out << fmt::format(",{:.17g}", m.entries(i, j));
    out << '\n';
  }
}

nlohmann::json to_json(const Reconstruction& r) {
  return {{"coefficients", std::vector<double>(r.coefficients.begin(), r.coefficients.end())},
          {"residual", r.residual},
          {"effective_rank", r.effective_rank},
          {"singular_values", std::vector<double>(r.singular_values.begin(), r.singular_values.end())}};
}

}  // namespace billiards
