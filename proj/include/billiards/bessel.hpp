#pragma once

#include <vector>

namespace billiards {

// First `count` positive zeros of J_m.
std::vector<double> bessel_j_zeros(int m, int count);

// j_{m,p} for the given order and rank (p ≥ 1).
double bessel_j_zero(int m, int p);

// Dirichlet eigenvalues j_{m,p}² ≤ lambda_max of the unit disk, sorted, with
// multiplicity two for m ≥ 1.
std::vector<double> disk_dirichlet_eigenvalues(double lambda_max);

}  // namespace billiards
