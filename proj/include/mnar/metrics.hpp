#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mnar/linalg.hpp"
#include "mnar/matrix.hpp"

namespace mnar {

/// Mean squared entrywise error, normalized by mn. Single-realization
/// empirical MSE; the expectation is approximated by seed-averaging at the
/// harness level.
inline double mse(const Matrix& estimate, const Matrix& truth) {
    require_same_shape(estimate, truth, "mse");
    return (estimate - truth).squaredNorm() / double(truth.size());
}

/// k-th value = fraction of squared singular-value mass captured by the top
/// k components. Nondecreasing, final value 1. Diagnoses approximate
/// low-rankness.
inline std::vector<double> rank_energy_curve(const Matrix& a) {
    SvdFactors f = svd(a);
    const double total = f.sigma.squaredNorm();
    if (total == 0.0)
        throw std::invalid_argument("rank_energy_curve: zero matrix");
    std::vector<double> curve;
    curve.reserve(std::size_t(f.sigma.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
        acc += f.sigma(i) * f.sigma(i);
        curve.push_back(acc / total);
    }
    return curve;
}

struct EstimatorReport {
    Matrix estimate;
    double mse = -1.0;  // < 0 when no truth was available
    double wall_time_seconds = 0.0;
    std::string method;  // "usvt" or "candes_recht"
};

}  // namespace mnar
