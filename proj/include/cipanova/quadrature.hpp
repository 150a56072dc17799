#pragma once

#include <vector>

namespace cipanova {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss–Jacobi rule on [−1, 1] for the weight (1 − x)^alpha (1 + x)^beta,
/// alpha, beta > −1, built by Golub–Welsch from the Jacobi three-term
/// recurrence. Nodes ascending; weights sum to the weight's total mass.
[[nodiscard]] QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// The same rule mapped to η ∈ (0, 1), for the weight η^beta (1 − η)^alpha
/// (x = 2η − 1; weights rescaled by 2^−(alpha+beta+1)).
[[nodiscard]] QuadratureRule gauss_jacobi_unit(int n, double alpha, double beta);

}  // namespace cipanova
