#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "billiards/geometry.hpp"

namespace billiards {

struct RadonMatrix {
  std::vector<double> h_grid;
  std::vector<std::function<double(double)>> basis;  // functions of x
  Eigen::MatrixXd entries;                            // R[i][j] = R_plus of basis_j at h_i
  Eigen::VectorXd singular_values;                    // descending
};

// {cos(2jx)}, 0 ≤ j < J.
std::vector<std::function<double(double)>> cosine_basis(int J);

// Rows follow h_grid (strictly monotone, inside (q(N), 0)). An empty basis means cosine_basis(J).
RadonMatrix radon_matrix(const LiouvilleTable& table, const std::vector<double>& h_grid, int J,
                         std::vector<std::function<double(double)>> basis = {});

// R_plus of an arbitrary K on each h of the grid.
Eigen::VectorXd radon_profile(const LiouvilleTable& table, const std::vector<double>& h_grid,
                              const std::function<double(double)>& Kx);

struct Reconstruction {
  Eigen::VectorXd coefficients;
  double residual = 0.0;  // ‖R c − data‖₂ / ‖data‖₂ (absolute when data = 0)
  int effective_rank = 0;
  Eigen::VectorXd singular_values;
};

// Truncated SVD: singular values below reg·σ_max are dropped. Throws RankDeficient
// when fewer than min_rank survive.
Reconstruction invert_radon(const RadonMatrix& matrix, const Eigen::VectorXd& data, double reg, int min_rank = 0);

struct RotationProfile {
  std::vector<std::pair<double, double>> points;  // (h, ω)
  bool strictly_increasing = false;
};

// Rotation numbers of the circles Λ(h) through x = 0, h ∈ (q(N), 0).
RotationProfile rotation_profile(const LiouvilleTable& table, const std::vector<double>& h_grid, int bounces = 4000);

void write_matrix_csv(std::ostream& out, const RadonMatrix& m);
nlohmann::json to_json(const Reconstruction& r);

}  // namespace billiards
