#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mnar/matrix.hpp"
#include "mnar/piecewise.hpp"
#include "mnar/rng.hpp"

namespace mnar {

/// Total function from [-1,1] to [0,1] giving the reveal probability of an
/// entry as a function of its true value. Built-ins cover every f used in
/// the numerical examples; a PiecewiseConstantFn covers estimated ones.
class MissingnessFn {
public:
    static MissingnessFn constant(double c) {
        check_range(c);
        return MissingnessFn([c](double) { return c; }, "const:" + std::to_string(c));
    }

    /// f(x) = 0.5 x^2 + 0.3
    static MissingnessFn quadratic() {
        return MissingnessFn([](double x) { return 0.5 * x * x + 0.3; }, "quad");
    }

    /// f(x) = x on [0,1] (0 below). Used with matrices whose entries are
    /// probabilities.
    static MissingnessFn identity() {
        return MissingnessFn([](double x) { return x < 0.0 ? 0.0 : x; }, "identity");
    }

    static MissingnessFn piecewise(PiecewiseConstantFn f) {
        auto fn = [f = std::move(f)](double x) { return f(x); };
        return MissingnessFn(std::move(fn), "piecewise");
    }

    /// Parses the CLI mini-language: "const:c", "quad", "identity".
    static MissingnessFn parse(const std::string& spec) {
        if (spec == "quad") return quadratic();
        if (spec == "identity") return identity();
        if (spec.rfind("const:", 0) == 0) {
            double c = std::stod(spec.substr(6));
            return constant(c);
        }
        throw std::invalid_argument("unknown f-spec: " + spec);
    }

    double operator()(double x) const {
        double p = fn_(x);
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("MissingnessFn: value outside [0,1] at x=" +
                                    std::to_string(x));
        return p;
    }

    const std::string& name() const { return name_; }

private:
    MissingnessFn(std::function<double(double)> fn, std::string name)
        : fn_(std::move(fn)), name_(std::move(name)) {}

    static void check_range(double c) {
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("constant missingness must be in [0,1]");
    }

    std::function<double(double)> fn_;
    std::string name_;
};

/// Builds an n x n rank-r matrix whose entries are marginally Uniform[0,1]
/// via the dyadic binary-expansion construction: r-1 terms d_i u_i v_i^T
/// with d_i = 2^-i and Bernoulli(1/sqrt(2)) vectors, plus a final all-ones
/// x Uniform[0, 2^-(r-1)] term. With shift_to_pm1, returns 2*M1 - 1
/// (entries Uniform[-1,1]); the shift only rescales the all-ones component,
/// so the rank is r (w.p. 1) in both conventions.
inline Matrix generate_uniform_low_rank(int n, int r, bool shift_to_pm1, Seed seed) {
    if (n < 1) throw std::invalid_argument("generate_uniform_low_rank: n must be >= 1");
    if (r < 2 || r > 20)
        throw std::invalid_argument("generate_uniform_low_rank: r must be in [2,20]");
    Rng rng(seed);
    const double p = 1.0 / std::sqrt(2.0);
    const int dyadic_terms = r - 1;
    Matrix m = Matrix::Zero(n, n);
    Eigen::VectorXd u(n), v(n);
    for (int i = 1; i <= dyadic_terms; ++i) {
        const double d = std::ldexp(1.0, -i);
        for (int k = 0; k < n; ++k) u(k) = rng.bernoulli(p) ? 1.0 : 0.0;
        for (int k = 0; k < n; ++k) v(k) = rng.bernoulli(p) ? 1.0 : 0.0;
        m.noalias() += d * u * v.transpose();
    }
    const double tail = std::ldexp(1.0, -dyadic_terms);
    for (int k = 0; k < n; ++k) v(k) = rng.uniform(0.0, tail);
    m.noalias() += Eigen::VectorXd::Ones(n) * v.transpose();
    if (shift_to_pm1) m = 2.0 * m.array() - 1.0;
    return m;
}

/// Reveals each entry of X independently with probability f(m_ij).
/// The reveal probability depends on the TRUE entry m_ij, never on the
/// noisy x_ij.
inline ObservedMatrix apply_missingness(const Matrix& m, const Matrix& x,
                                        const MissingnessFn& f, Seed seed) {
    require_same_shape(m, x, "apply_missingness");
    Rng rng(seed);
    Mask mask(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            mask(i, j) = rng.bernoulli(f(m(i, j)));
    Matrix vals = x;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!mask(i, j)) vals(i, j) = 0.0;
    return ObservedMatrix(std::move(vals), std::move(mask));
}

/// x_ij = 1 with probability m_ij, else 0. Requires entries in [0,1].
inline Matrix bernoulli_noise(const Matrix& m, Seed seed) {
    Rng rng(seed);
    Matrix x(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double p = m(i, j);
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("bernoulli_noise: entry outside [0,1]");
            x(i, j) = rng.bernoulli(p) ? 1.0 : 0.0;
        }
    return x;
}

/// Normalized histogram of the entries over [-1,1]; bin masses sum to 1.
/// The last bin is closed on the right.
inline std::vector<double> empirical_entry_distribution(const Matrix& m, int nbins) {
    if (nbins < 1) throw std::invalid_argument("empirical_entry_distribution: nbins >= 1");
    std::vector<double> h(std::size_t(nbins), 0.0);
    const double width = 2.0 / nbins;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            int bin = int(std::floor((m(i, j) + 1.0) / width));
            bin = std::min(std::max(bin, 0), nbins - 1);
            h[std::size_t(bin)] += 1.0;
        }
    const double total = double(m.size());
    for (double& v : h) v /= total;
    return h;
}

}  // namespace mnar
