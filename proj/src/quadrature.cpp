#include "cipanova/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace cipanova {

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) {
        throw std::invalid_argument("quadrature needs at least one node");
    }
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw std::invalid_argument("Jacobi exponents must exceed -1");
    }
    const double ab = alpha + beta;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        // The k = 0 diagonal has a removable 0/0 when alpha + beta = 0.
        diag[k] = (k == 0) ? (beta - alpha) / (ab + 2.0)
                           : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double b2;
        if (k == 1) {
            // (k + α + β)/(2k + α + β − 1) cancels; written out so α + β = −1 is safe.
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[k - 1] = std::sqrt(b2);
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jacobi(k, k) = diag[k];
        if (k + 1 < n) {
            jacobi(k, k + 1) = off[k];
            jacobi(k + 1, k) = off[k];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Golub-Welsch eigen decomposition failed");
    }
    const double log_mass = (ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                            std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0);
    const double mass = std::exp(log_mass);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()[k];
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mass * v0 * v0;
    }
    return rule;
}

QuadratureRule gauss_jacobi_unit(int n, double alpha, double beta) {
    QuadratureRule rule = gauss_jacobi(n, alpha, beta);
    const double scale = std::exp(-(alpha + beta + 1.0) * std::log(2.0));
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = 0.5 * (rule.nodes[k] + 1.0);
        rule.weights[k] *= scale;
    }
    return rule;
}

}  // namespace cipanova
