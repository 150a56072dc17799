#include "cipanova/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cipanova {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double cholesky_logdet(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::LLT<Matrix> factor_spd(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite(std::string(what) + " is not positive definite");
    }
    return llt;
}

}  // namespace

ResidualStats residual_stats(const Matrix& z, std::span<const double> r) {
    if (static_cast<Eigen::Index>(r.size()) != z.rows()) {
        throw std::invalid_argument("residual length does not match design rows");
    }
    const Eigen::Map<const Vector> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    return {z.rows(), z.transpose() * rv, rv.squaredNorm()};
}

LowRankFactors::LowRankFactors(Matrix ztz, Matrix w_inv) : ztz_(std::move(ztz)), w_inv_(std::move(w_inv)) {
    if (ztz_.rows() != ztz_.cols() || w_inv_.rows() != w_inv_.cols() || ztz_.rows() != w_inv_.rows()) {
        throw std::invalid_argument("ZᵀZ and W⁻¹ must be square of equal order");
    }
    const auto llt = factor_spd(w_inv_, "W^-1");
    w_ = llt.solve(Matrix::Identity(w_inv_.rows(), w_inv_.cols()));
    w_ = 0.5 * (w_ + w_.transpose());
    logdet_w_ = -cholesky_logdet(llt);
}

double LowRankGaussian::logpdf(const ResidualStats& r) const {
    if (!(a > 0.0) || !(b >= 0.0)) {
        throw std::domain_error("low-rank Gaussian needs a > 0 and b >= 0");
    }
    const auto n = static_cast<double>(r.n);
    if (b == 0.0 || factors == nullptr || factors->q() == 0) {
        return -0.5 * (n * kLog2Pi + n * std::log(a) + r.rtr / a);
    }
    const double ratio = b / a;
    const Matrix m = factors->w() + ratio * factors->ztz();
    const auto llt = factor_spd(m, "W + (b/a)ZᵀZ");
    const double logdet_sigma = n * std::log(a) + cholesky_logdet(llt) - factors->logdet_w();
    const double quad = r.rtr / a - (ratio / a) * r.ztr.dot(llt.solve(r.ztr));
    return -0.5 * (n * kLog2Pi + logdet_sigma + quad);
}

double lowrank_logpdf(std::span<const double> r, const Matrix& z, const Matrix& w_inv, double a,
                      double b) {
    const LowRankFactors factors(z.transpose() * z, w_inv);
    return LowRankGaussian{a, b, &factors}.logpdf(residual_stats(z, r));
}

double log_beta_function(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double inverted_beta_logpdf(double v, double a, double b, double c) {
    if (!(v > 0.0) || !(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
        throw std::domain_error("inverted-beta density needs v, a, b, c > 0");
    }
    return b * std::log(c) - log_beta_function(a, b) + (a - 1.0) * std::log(v) -
           (a + b) * std::log(v + c);
}

double half_cauchy_logpdf(double sigma, double scale) {
    if (!(sigma > 0.0) || !(scale > 0.0)) {
        throw std::domain_error("half-Cauchy density needs sigma > 0 and scale > 0");
    }
    const double t = sigma / scale;
    return std::log(2.0 / std::numbers::pi) - std::log(scale) - std::log1p(t * t);
}

double arcsine_logpdf(double eta) {
    if (!(eta > 0.0) || !(eta < 1.0)) {
        throw std::domain_error("Beta(1/2,1/2) density needs 0 < eta < 1");
    }
    return -std::log(std::numbers::pi) - 0.5 * std::log(eta) - 0.5 * std::log1p(-eta);
}

double sample_arcsine(RandomSource& rng) {
    for (;;) {
        const double s = std::sin(0.5 * std::numbers::pi * rng.uniform());
        const double eta = s * s;
        if (eta > 0.0 && eta < 1.0) {
            return eta;
        }
    }
}

EtaSigma2 sample_sigma2_via_eta(double c, RandomSource& rng) {
    if (!(c > 0.0)) {
        throw std::domain_error("sigma0^2 must be positive");
    }
    const double eta = sample_arcsine(rng);
    return {eta, sigma2_from_eta(eta, c)};
}

Vector mvn_sample(const Vector& mean, const Matrix& cov, RandomSource& rng) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("mvn_sample: dimension mismatch");
    }
    const auto llt = factor_spd(cov, "covariance");
    Vector z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = rng.normal();
    }
    return mean + llt.matrixL() * z;
}

double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
    if (x.size() != mean.size() || cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("mvn_logpdf: dimension mismatch");
    }
    const auto llt = factor_spd(cov, "covariance");
    const Vector dev = x - mean;
    const Vector white = llt.matrixL().solve(dev);
    const auto k = static_cast<double>(x.size());
    return -0.5 * (k * kLog2Pi + cholesky_logdet(llt) + white.squaredNorm());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_sum_exp(std::span<const double> values) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        peak = std::max(peak, v);
    }
    if (!std::isfinite(peak)) {
        return peak;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += std::exp(v - peak);
    }
    return peak + std::log(sum);
}

}  // namespace cipanova
