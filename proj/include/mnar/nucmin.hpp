#pragma once

#include <cmath>
#include <stdexcept>

#include "mnar/linalg.hpp"
#include "mnar/matrix.hpp"

namespace mnar {

struct SolverParams {
    double rho = 1.0;            // splitting penalty
    double tol = 1e-6;           // residual tolerance (relative to data norm)
    int max_iters = 5000;
    double over_relaxation = 1.6;  // in [1, 1.9]

    void validate() const {
        if (!(rho > 0)) throw std::invalid_argument("SolverParams: rho must be > 0");
        if (!(tol > 0)) throw std::invalid_argument("SolverParams: tol must be > 0");
        if (max_iters < 1)
            throw std::invalid_argument("SolverParams: max_iters must be >= 1");
        if (!(over_relaxation >= 1.0 && over_relaxation <= 1.9))
            throw std::invalid_argument(
                "SolverParams: over_relaxation must be in [1, 1.9]");
    }
};

struct SolveDiagnostics {
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    double final_nuclear_norm = 0.0;
};

/// Euclidean projection onto the feasible set: revealed positions are set
/// to the observed values, all other entries are clamped to [-1,1].
inline Matrix project_feasible(const Matrix& a, const ObservedMatrix& obs) {
    require_same_shape(a, obs.values, "project_feasible");
    Matrix out = clamp_entries(a, -1.0, 1.0);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (obs.mask(i, j)) out(i, j) = obs.values(i, j);
    return out;
}

/// Modified Candes-Recht estimator: minimizes the nuclear norm over matrices
/// equal to the observed values on revealed entries with all entries in
/// [-1,1]. Solved by two-block ADMM alternating singular value soft
/// thresholding (prox of the nuclear norm) with projection onto the feasible
/// set; the returned matrix is feasibility-projected so it satisfies both
/// constraints exactly.
inline std::pair<Matrix, SolveDiagnostics> modified_candes_recht(
    const ObservedMatrix& obs, const SolverParams& params = {}) {
    params.validate();
    if (obs.revealed_count() == 0)
        throw std::invalid_argument("modified_candes_recht: empty mask");
    const Eigen::Index m = obs.rows(), n = obs.cols();

    Matrix y = Matrix::Zero(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            if (obs.mask(i, j)) y(i, j) = obs.values(i, j);
    const double stop_scale = params.tol * (1.0 + y.norm());

    Matrix a = Matrix::Zero(m, n);       // nuclear-norm block
    Matrix b = Matrix::Zero(m, n);       // feasibility block
    Matrix dual = Matrix::Zero(m, n);    // scaled dual variable
    const double alpha = params.over_relaxation;

    SolveDiagnostics diag;
    for (int k = 1; k <= params.max_iters; ++k) {
        a = sv_soft_threshold(b - dual, 1.0 / params.rho);
        const Matrix a_relaxed = alpha * a + (1.0 - alpha) * b;
        const Matrix b_prev = b;
        b = project_feasible(a_relaxed + dual, obs);
        dual += a_relaxed - b;

        diag.iterations = k;
        diag.primal_residual = (a - b).norm();
        diag.dual_residual = params.rho * (b - b_prev).norm();
        if (std::max(diag.primal_residual, diag.dual_residual) <= stop_scale) {
            diag.converged = true;
            break;
        }
    }
    Matrix estimate = project_feasible(a, obs);
    diag.final_nuclear_norm = nuclear_norm(estimate);
    return {std::move(estimate), diag};
}

/// Optimality sanity check against any feasible reference (e.g. the true M
/// in simulations): reports the worst constraint violation of the candidate
/// and the nuclear-norm gap relative to the reference.
struct SolutionCertificate {
    double feasibility_violation = 0.0;  // max over constraints
    double nuclear_norm_gap = 0.0;       // ||candidate||_* - ||reference||_*
};

inline SolutionCertificate certify_solution(const Matrix& candidate,
                                            const ObservedMatrix& obs,
                                            const Matrix& feasible_reference) {
    require_same_shape(candidate, obs.values, "certify_solution");
    SolutionCertificate cert;
    for (Eigen::Index j = 0; j < candidate.cols(); ++j)
        for (Eigen::Index i = 0; i < candidate.rows(); ++i) {
            const double x = candidate(i, j);
            double viol = std::max(0.0, std::abs(x) - 1.0);
            if (obs.mask(i, j))
                viol = std::max(viol, std::abs(x - obs.values(i, j)));
            cert.feasibility_violation = std::max(cert.feasibility_violation, viol);
        }
    cert.nuclear_norm_gap =
        nuclear_norm(candidate) - nuclear_norm(feasible_reference);
    return cert;
}

}  // namespace mnar
