#pragma once

#include "cipanova/constraint_model.hpp"
#include "cipanova/gaussian_core.hpp"

#include <span>
#include <stdexcept>

namespace cipanova {

/// Plug-in parameters of the null model: common mean and standard deviation.
struct NullParams {
    double alpha0 = 0.0;
    double sigma0 = 1.0;

    [[nodiscard]] double sigma0_sq() const { return sigma0 * sigma0; }
};

/// Data too degenerate for the null plug-in (fewer than two points or zero spread).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximum-likelihood fit of the null model: grand mean and √(Σ(y − ȳ)²/n).
[[nodiscard]] NullParams estimate_null_params(std::span<const double> y);

/// Conditional intrinsic prior of an encompassing design relative to the null:
///   σ ~ half-Cauchy(σ0),  γ = (α, δ) | σ ~ N_q(α0·e, (σ² + σ0²) W⁻¹),
/// with W⁻¹ = n/(q + 1) · (ZᵀZ)⁻¹ and e = (1, 0, …, 0).
class CipSpec {
public:
    CipSpec(EncompassingDesign design, Matrix z);

    [[nodiscard]] const EncompassingDesign& design() const { return design_; }
    [[nodiscard]] const Matrix& z() const { return z_; }
    [[nodiscard]] const LowRankFactors& factors() const { return factors_; }
    [[nodiscard]] const Matrix& ztz() const { return factors_.ztz(); }
    [[nodiscard]] const Matrix& w_inv() const { return factors_.w_inv(); }
    [[nodiscard]] const Matrix& w() const { return factors_.w(); }
    /// Lower Cholesky factor of W⁻¹, for sampling.
    [[nodiscard]] const Matrix& w_inv_chol() const { return w_inv_chol_; }
    [[nodiscard]] Eigen::Index n() const { return z_.rows(); }
    [[nodiscard]] Eigen::Index q() const { return z_.cols(); }
    [[nodiscard]] Vector e() const { return Vector::Unit(q(), 0); }

private:
    EncompassingDesign design_;
    Matrix z_;
    LowRankFactors factors_;
    Matrix w_inv_chol_;
};

[[nodiscard]] CipSpec make_cip(const EncompassingDesign& design, std::span<const int> group_sizes);

/// log p(γ, σ | α0, σ0) of the conditional intrinsic prior.
[[nodiscard]] double cip_logpdf(const Vector& gamma, double sigma, const NullParams& theta0,
                                const CipSpec& spec);

/// Draws from the conditional intrinsic prior. Row t of `gamma` is (α, δ)ᵗ.
struct PriorDraws {
    Matrix gamma;  // T × q
    Vector eta;
    Vector sigma2;

    [[nodiscard]] Eigen::Index size() const { return gamma.rows(); }
};

/// For each draw: η ~ Beta(1/2,1/2), σ² = σ0²η/(1 − η), γ ~ N_q(α0·e, (σ² + σ0²)W⁻¹).
[[nodiscard]] PriorDraws cip_sample(const NullParams& theta0, const CipSpec& spec, Eigen::Index count,
                                    RandomSource& rng);

}  // namespace cipanova
