#pragma once

#include <stdexcept>
#include <vector>

#include "mnar/matrix.hpp"
#include "mnar/obsmodel.hpp"
#include "mnar/piecewise.hpp"
#include "mnar/rng.hpp"

namespace mnar {

/// Randomized-bin estimator of the missingness function. Grid points
/// c_i = -1 + (i-2)/b for i = 1..2b+3 are jittered uniformly within
/// +-1/(4b) to give breakpoints a_i; on each interval [a_l, a_{l+1}) the
/// estimate is the proportion of revealed entries among those whose
/// estimated value falls in the interval (0 for empty intervals).
inline PiecewiseConstantFn estimate_f(const Mask& obs_mask, const Matrix& m_hat,
                                      int b, Seed seed) {
    if (b < 1) throw std::invalid_argument("estimate_f: b must be >= 1");
    if (obs_mask.rows() != m_hat.rows() || obs_mask.cols() != m_hat.cols())
        throw std::invalid_argument("estimate_f: mask/estimate shape mismatch");

    Rng rng(seed);
    const int npts = 2 * b + 3;
    std::vector<double> breakpoints(static_cast<std::size_t>(npts), 0.0);
    const double jitter = 1.0 / (4.0 * b);
    for (int i = 1; i <= npts; ++i) {
        const double c = -1.0 + double(i - 2) / b;
        breakpoints[std::size_t(i - 1)] = rng.uniform(c - jitter, c + jitter);
    }

    const std::size_t nbins = std::size_t(2 * b + 2);
    std::vector<double> revealed(nbins, 0.0), total(nbins, 0.0);
    // temporary fn just for bin lookup; values filled afterwards
    PiecewiseConstantFn bins(breakpoints, std::vector<double>(nbins, 0.0));
    for (Eigen::Index j = 0; j < m_hat.cols(); ++j)
        for (Eigen::Index i = 0; i < m_hat.rows(); ++i) {
            const std::size_t l = bins.interval_index(m_hat(i, j));
            total[l] += 1.0;
            if (obs_mask(i, j)) revealed[l] += 1.0;
        }
    std::vector<double> values(nbins, 0.0);
    for (std::size_t l = 0; l < nbins; ++l)
        if (total[l] > 0.0) values[l] = revealed[l] / total[l];
    return PiecewiseConstantFn(std::move(breakpoints), std::move(values));
}

inline double evaluate_piecewise(const PiecewiseConstantFn& f_hat, double x) {
    return f_hat(x);
}

/// (1/mn) sum over entries of (f_hat(m_ij) - f_true(m_ij))^2 — the squared
/// error integrated against the empirical distribution of the entries of M.
inline double integrated_sq_error(const PiecewiseConstantFn& f_hat,
                                  const MissingnessFn& f_true, const Matrix& m) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double x = m(i, j);
            const double d = f_hat(x) - f_true(x);
            acc += d * d;
        }
    return acc / double(m.size());
}

}  // namespace mnar
