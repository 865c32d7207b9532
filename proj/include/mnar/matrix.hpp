#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace mnar {

using Matrix = Eigen::MatrixXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

inline void require_finite(const Matrix& a, const std::string& name) {
    if (!a.allFinite())
        throw std::invalid_argument(name + " contains NaN or Inf entries");
}

inline void require_same_shape(const Matrix& a, const Matrix& b,
                               const std::string& what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(what + ": shape mismatch (" +
                                    std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " vs " +
                                    std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
}

/// Partially observed matrix: values are meaningful only where mask is true.
/// Every revealed value must lie in [-1,1].
struct ObservedMatrix {
    Matrix values;
    Mask mask;

    ObservedMatrix() = default;
    ObservedMatrix(Matrix v, Mask m) : values(std::move(v)), mask(std::move(m)) {
        if (values.rows() != mask.rows() || values.cols() != mask.cols())
            throw std::invalid_argument("ObservedMatrix: values/mask shape mismatch");
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            for (Eigen::Index i = 0; i < values.rows(); ++i)
                if (mask(i, j)) {
                    const double x = values(i, j);
                    if (!(x >= -1.0 && x <= 1.0))
                        throw std::invalid_argument(
                            "ObservedMatrix: revealed value outside [-1,1]");
                }
    }

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    Eigen::Index revealed_count() const {
        return mask.count();
    }
};

}  // namespace mnar
