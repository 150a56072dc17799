#pragma once

#include "cipanova/random.hpp"

#include <Eigen/Dense>

#include <span>
#include <stdexcept>

namespace cipanova {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a matrix that must be symmetric positive definite is not.
class NotPositiveDefinite : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sufficient statistics of a residual vector r against a design Z.
struct ResidualStats {
    Eigen::Index n = 0;
    Vector ztr;        // Zᵀr
    double rtr = 0.0;  // rᵀr
};

[[nodiscard]] ResidualStats residual_stats(const Matrix& z, std::span<const double> r);

/// Design-level factors of the covariance a·I_n + b·Z W⁻¹ Zᵀ: ZᵀZ, W⁻¹, W and
/// log det W. Built once per design, shared by every (a, b) evaluation.
class LowRankFactors {
public:
    LowRankFactors(Matrix ztz, Matrix w_inv);

    [[nodiscard]] const Matrix& ztz() const { return ztz_; }
    [[nodiscard]] const Matrix& w_inv() const { return w_inv_; }
    [[nodiscard]] const Matrix& w() const { return w_; }
    [[nodiscard]] double logdet_w() const { return logdet_w_; }
    [[nodiscard]] Eigen::Index q() const { return ztz_.rows(); }

private:
    Matrix ztz_;
    Matrix w_inv_;
    Matrix w_;
    double logdet_w_ = 0.0;
};

/// Zero-mean n-variate normal with covariance a·I_n + b·Z W⁻¹ Zᵀ.
///
/// Never materializes the n×n covariance. With M = W + (b/a)·ZᵀZ,
///   log det Σ = n log a + log det M − log det W          (determinant lemma)
///   rᵀΣ⁻¹r    = rᵀr/a − (b/a²)·(Zᵀr)ᵀ M⁻¹ (Zᵀr)          (Woodbury)
/// so one q×q Cholesky per evaluation suffices.
struct LowRankGaussian {
    double a = 1.0;
    double b = 0.0;
    const LowRankFactors* factors = nullptr;

    /// Throws NotPositiveDefinite if M cannot be factored.
    [[nodiscard]] double logpdf(const ResidualStats& r) const;
};

/// Convenience form of LowRankGaussian::logpdf from raw inputs.
[[nodiscard]] double lowrank_logpdf(std::span<const double> r, const Matrix& z,
                                    const Matrix& w_inv, double a, double b);

/// log B(a, b).
[[nodiscard]] double log_beta_function(double a, double b);

/// Inverted-beta density c^b / B(a,b) · v^(a−1) · (v + c)^−(a+b), v > 0.
[[nodiscard]] double inverted_beta_logpdf(double v, double a, double b, double c);

/// Half-Cauchy on σ > 0 with scale s: 2 / (π s (1 + σ²/s²)).
[[nodiscard]] double half_cauchy_logpdf(double sigma, double scale);

/// Beta(1/2, 1/2) (arcsine) log-density on (0, 1).
[[nodiscard]] double arcsine_logpdf(double eta);

/// Beta(1/2, 1/2) draw by the arcsine law η = sin²(πU/2); never returns 0 or 1.
[[nodiscard]] double sample_arcsine(RandomSource& rng);

struct EtaSigma2 {
    double eta;
    double sigma2;
};

/// η ~ Beta(1/2, 1/2) and σ² = c·η/(1 − η), so σ² ~ InvBeta(1/2, 1/2, c).
[[nodiscard]] EtaSigma2 sample_sigma2_via_eta(double c, RandomSource& rng);

/// σ² = c·η/(1 − η).
[[nodiscard]] inline double sigma2_from_eta(double eta, double c) { return c * eta / (1.0 - eta); }

[[nodiscard]] Vector mvn_sample(const Vector& mean, const Matrix& cov, RandomSource& rng);
[[nodiscard]] double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x);

/// log(Σ exp(v_i)); −∞ for an empty or all −∞ input.
[[nodiscard]] double log_sum_exp(std::span<const double> values);

}  // namespace cipanova
