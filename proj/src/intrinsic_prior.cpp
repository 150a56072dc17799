#include "cipanova/intrinsic_prior.hpp"

#include <cmath>

namespace cipanova {

namespace {

LowRankFactors make_factors(const Matrix& z) {
    const Matrix ztz = z.transpose() * z;
    Eigen::LLT<Matrix> llt(ztz);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("design matrix is rank deficient");
    }
    const double scale = static_cast<double>(z.rows()) / static_cast<double>(z.cols() + 1);
    Matrix w_inv = scale * llt.solve(Matrix::Identity(z.cols(), z.cols()));
    w_inv = 0.5 * (w_inv + w_inv.transpose());
    return LowRankFactors(ztz, std::move(w_inv));
}

}  // namespace

NullParams estimate_null_params(std::span<const double> y) {
    if (y.size() < 2) {
        throw DegenerateDataError("the null plug-in needs at least two observations");
    }
    const auto n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (double v : y) {
        ss += (v - mean) * (v - mean);
    }
    const double sigma0 = std::sqrt(ss / n);
    if (!(sigma0 > 1e-12 * std::max(1.0, std::abs(mean)))) {
        throw DegenerateDataError("responses have zero variance; the null scale sigma0 would be 0");
    }
    return {mean, sigma0};
}

CipSpec::CipSpec(EncompassingDesign design, Matrix z)
    : design_(std::move(design)), z_(std::move(z)), factors_(make_factors(z_)) {
    if (z_.cols() != design_.q) {
        throw std::invalid_argument("design matrix columns do not match the design's q");
    }
    // Z·e = 1_n: the first column is the intercept.
    if ((z_.col(0).array() != 1.0).any()) {
        throw std::invalid_argument("first design column must be the intercept");
    }
    w_inv_chol_ = Eigen::LLT<Matrix>(factors_.w_inv()).matrixL();
}

CipSpec make_cip(const EncompassingDesign& design, std::span<const int> group_sizes) {
    return CipSpec(design, build_design(design, group_sizes));
}

double cip_logpdf(const Vector& gamma, double sigma, const NullParams& theta0, const CipSpec& spec) {
    if (gamma.size() != spec.q()) {
        throw std::invalid_argument("gamma dimension does not match the design");
    }
    const double scale = sigma * sigma + theta0.sigma0_sq();
    return half_cauchy_logpdf(sigma, theta0.sigma0) +
           mvn_logpdf(gamma, theta0.alpha0 * spec.e(), scale * spec.w_inv());
}

PriorDraws cip_sample(const NullParams& theta0, const CipSpec& spec, Eigen::Index count,
                      RandomSource& rng) {
    if (count < 1) {
        throw std::invalid_argument("prior draw count must be positive");
    }
    const Eigen::Index q = spec.q();
    PriorDraws draws{Matrix(count, q), Vector(count), Vector(count)};
    const Matrix& chol = spec.w_inv_chol();
    Vector z(q);
    for (Eigen::Index t = 0; t < count; ++t) {
        const auto [eta, sigma2] = sample_sigma2_via_eta(theta0.sigma0_sq(), rng);
        draws.eta[t] = eta;
        draws.sigma2[t] = sigma2;
        for (Eigen::Index i = 0; i < q; ++i) {
            z[i] = rng.normal();
        }
        const double scale = std::sqrt(sigma2 + theta0.sigma0_sq());
        const Vector draw = chol.triangularView<Eigen::Lower>() * z;
        draws.gamma.row(t) = (scale * draw).transpose();
        draws.gamma(t, 0) += theta0.alpha0;
    }
    return draws;
}

}  // namespace cipanova
