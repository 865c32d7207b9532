#pragma once

#include <cmath>
#include <stdexcept>

#include "mnar/linalg.hpp"
#include "mnar/matrix.hpp"

namespace mnar {

struct UsvtParams {
    double eta = 0.02;  // threshold slack, in (0,1)
    // Clamp range for the thresholded mask matrix R-hat. R-hat estimates
    // reveal probabilities, so [0,1] is the tighter valid range; set false
    // to clamp to [-1,1] literally.
    bool clamp_rhat_to_unit = true;

    void validate() const {
        if (!(eta > 0.0 && eta < 1.0))
            throw std::invalid_argument("UsvtParams: eta must be in (0,1)");
    }
};

/// Hard-threshold at tau = (2 + eta) * max(sqrt(m), sqrt(n)), then clamp
/// entries to [lo, hi].
inline Matrix usvt_core(const Matrix& z, double eta, double lo = -1.0,
                        double hi = 1.0) {
    const double tau =
        (2.0 + eta) * std::sqrt(double(std::max(z.rows(), z.cols())));
    return clamp_entries(sv_hard_threshold(z, tau), lo, hi);
}

/// Modified universal singular value thresholding estimator. Thresholds the
/// zero-filled value matrix Y and the 0/1 mask matrix P separately, then
/// forms the entrywise ratio w_ij = q_ij / r_ij (0 where r_ij vanishes) and
/// clamps to [-1,1]. The ratio corrects for nonuniform reveal probabilities.
inline Matrix modified_usvt(const ObservedMatrix& obs,
                            const UsvtParams& params = {}) {
    params.validate();
    const Eigen::Index m = obs.rows(), n = obs.cols();
    Matrix y = Matrix::Zero(m, n);
    Matrix p = Matrix::Zero(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            if (obs.mask(i, j)) {
                y(i, j) = obs.values(i, j);
                p(i, j) = 1.0;
            }
    const Matrix q_hat = usvt_core(y, params.eta, -1.0, 1.0);
    const Matrix r_hat =
        usvt_core(p, params.eta, params.clamp_rhat_to_unit ? 0.0 : -1.0, 1.0);
    Matrix w(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) {
            const double r = r_hat(i, j);
            // floating-point guard for "r_ij != 0"
            w(i, j) = std::abs(r) <= 1e-12 ? 0.0 : q_hat(i, j) / r;
        }
    return clamp_entries(w, -1.0, 1.0);
}

}  // namespace mnar
