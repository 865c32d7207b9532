#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

#include "mnar/matrix.hpp"

namespace mnar {

/// Full singular value decomposition A = U diag(sigma) V^T with
/// r = min(m,n), sigma nonincreasing and nonnegative.
struct SvdFactors {
    Matrix u;              // m x r, column-orthonormal
    Eigen::VectorXd sigma; // r, nonincreasing
    Matrix v;              // n x r, column-orthonormal

    Matrix reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }
};

struct SvdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full SVD via Eigen's divide-and-conquer bidiagonalization.
/// Singular values below 1e-12 * sigma_max are snapped to exact zero so
/// rank-dependent logic downstream is stable.
inline SvdFactors svd(const Matrix& a) {
    require_finite(a, "svd: input");
    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw SvdError("svd: decomposition did not converge");
    SvdFactors f{dec.matrixU(), dec.singularValues(), dec.matrixV()};
    const double cutoff = 1e-12 * (f.sigma.size() > 0 ? f.sigma(0) : 0.0);
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i)
        if (f.sigma(i) < cutoff) f.sigma(i) = 0.0;
    return f;
}

/// Keeps only singular components with sigma_i >= tau (ties included).
inline Matrix sv_hard_threshold(const Matrix& a, double tau) {
    if (tau < 0) throw std::invalid_argument("sv_hard_threshold: tau must be >= 0");
    SvdFactors f = svd(a);
    Eigen::Index k = 0;
    while (k < f.sigma.size() && f.sigma(k) >= tau) ++k;
    if (k == 0) return Matrix::Zero(a.rows(), a.cols());
    return f.u.leftCols(k) * f.sigma.head(k).asDiagonal() *
           f.v.leftCols(k).transpose();
}

/// Singular value shrinkage: sigma_i -> max(sigma_i - tau, 0). This is the
/// proximal operator of tau * nuclear norm.
inline Matrix sv_soft_threshold(const Matrix& a, double tau) {
    if (tau < 0) throw std::invalid_argument("sv_soft_threshold: tau must be >= 0");
    SvdFactors f = svd(a);
    Eigen::VectorXd s = (f.sigma.array() - tau).max(0.0);
    Eigen::Index k = 0;
    while (k < s.size() && s(k) > 0) ++k;
    if (k == 0) return Matrix::Zero(a.rows(), a.cols());
    return f.u.leftCols(k) * s.head(k).asDiagonal() * f.v.leftCols(k).transpose();
}

inline Matrix clamp_entries(const Matrix& a, double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("clamp_entries: lo > hi");
    return a.array().max(lo).min(hi);
}

/// Sum of singular values.
inline double nuclear_norm(const Matrix& a) { return svd(a).sigma.sum(); }

/// Root mean square of the entries, ((1/mn) sum a_ij^2)^(1/2).
inline double scaled_frobenius(const Matrix& a) {
    require_finite(a, "scaled_frobenius: input");
    return std::sqrt(a.squaredNorm() / double(a.size()));
}

}  // namespace mnar
