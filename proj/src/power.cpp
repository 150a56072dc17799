#include "cipanova/power.hpp"

#include "cipanova/gaussian_core.hpp"

#include <cmath>
#include <stdexcept>

namespace cipanova {

double difference_power(double delta, double sigma1, double sigma2, int n1, int n2, double z_crit) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || n1 < 1 || n2 < 1) {
        throw std::invalid_argument("power needs positive standard deviations and group sizes");
    }
    const double sd = std::sqrt(sigma1 * sigma1 / n1 + sigma2 * sigma2 / n2);
    return 1.0 - normal_cdf((z_crit * sd - delta) / sd);
}

std::vector<PowerRow> power_table(const std::vector<double>& deltas, double sigma, const std::vector<int>& n_per_group,
                                  double z_crit, const std::vector<std::string>& labels) {
    if (!labels.empty() && labels.size() != deltas.size()) {
        throw std::invalid_argument("one label per delta expected");
    }
    std::vector<PowerRow> rows;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        for (int n : n_per_group) {
            PowerRow row;
            row.label = labels.empty() ? std::string{} : labels[i];
            row.n_per_group = n;
            row.delta = deltas[i];
            row.sd = std::sqrt(2.0 * sigma * sigma / n);
            row.power = difference_power(deltas[i], sigma, sigma, n, n, z_crit);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<PowerRow> default_power_table() {
    return power_table({0.2, 0.3, 0.4}, 1.0, {25, 50}, 1.96, {"2s", "2m", "2l"});
}

}  // namespace cipanova
