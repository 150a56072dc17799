#pragma once

// Independent reference computations for the unit tests. Deliberately naive:
// dense n×n algebra, brute-force integration, textbook formulas.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double dense_mvn_logpdf(const Eigen::VectorXd& x, const Eigen::MatrixXd& cov) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double logdet = ldlt.vectorD().array().log().sum();
    const double quad = x.dot(ldlt.solve(x));
    return -0.5 * (static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

inline double trapezoid(const std::function<double(double)>& f, double lo, double hi, long steps) {
    const double h = (hi - lo) / static_cast<double>(steps);
    double sum = 0.5 * (f(lo) + f(hi));
    for (long i = 1; i < steps; ++i) {
        sum += f(lo + h * static_cast<double>(i));
    }
    return sum * h;
}

/// Midpoint rule; never evaluates f at the endpoints.
inline double midpoint(const std::function<double(double)>& f, double lo, double hi, long steps) {
    const double h = (hi - lo) / static_cast<double>(steps);
    double sum = 0.0;
    for (long i = 0; i < steps; ++i) {
        sum += f(lo + h * (static_cast<double>(i) + 0.5));
    }
    return sum * h;
}

/// log ∫ exp(g) over a grid, stabilized by the maximum.
inline double log_trapezoid(const std::function<double(double)>& g, double lo, double hi, long steps) {
    const double h = (hi - lo) / static_cast<double>(steps);
    std::vector<double> v(static_cast<std::size_t>(steps) + 1);
    for (long i = 0; i <= steps; ++i) {
        v[static_cast<std::size_t>(i)] = g(lo + h * static_cast<double>(i));
    }
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        sum += w * std::exp(v[i] - m);
    }
    return m + std::log(sum * h);
}

/// sup |F_n − F| for a sample against a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        if (!std::isfinite(f)) {
            throw std::domain_error("reference CDF is not finite");
        }
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

/// CDF of Beta(1/2, 1/2).
inline double arcsine_cdf(double x) { return 2.0 / std::numbers::pi * std::asin(std::sqrt(x)); }

/// Asymptotic Kolmogorov critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
