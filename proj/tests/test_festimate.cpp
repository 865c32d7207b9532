#include <catch2/catch_amalgamated.hpp>

#include "mnar/festimate.hpp"
#include "mnar/metrics.hpp"
#include "mnar/obsmodel.hpp"

using mnar::Matrix;

TEST_CASE("grid and jitter geometry") {
    for (int b : {1, 5, 25}) {
        Matrix m = Matrix::Zero(4, 4);
        mnar::Mask mask = mnar::Mask::Constant(4, 4, true);
        auto f = mnar::estimate_f(mask, m, b, 77);
        REQUIRE(int(f.values.size()) == 2 * b + 2);
        REQUIRE(int(f.breakpoints.size()) == 2 * b + 3);
        REQUIRE(f.breakpoints.front() <= -1.0);
        REQUIRE(f.breakpoints.back() >= 1.0);
        // jitter half-width 1/(4b) < spacing 1/b: gaps at least 1/(2b)
        for (std::size_t i = 0; i + 1 < f.breakpoints.size(); ++i)
            REQUIRE(f.breakpoints[i + 1] - f.breakpoints[i] >=
                    1.0 / (2.0 * b) - 1e-12);
    }
}

TEST_CASE("estimate_f degenerate masks") {
    Matrix m = mnar::generate_uniform_low_rank(50, 4, true, 1);
    auto all = mnar::estimate_f(mnar::Mask::Constant(50, 50, true), m, 5, 2);
    for (double v : all.values) REQUIRE((v == 0.0 || v == 1.0));
    // value 1 on every nonempty bin, 0 only on empty ones
    for (Eigen::Index j = 0; j < 50; ++j)
        for (Eigen::Index i = 0; i < 50; ++i)
            REQUIRE(all(m(i, j)) == 1.0);

    auto none = mnar::estimate_f(mnar::Mask::Constant(50, 50, false), m, 5, 2);
    for (double v : none.values) REQUIRE(v == 0.0);
}

TEST_CASE("estimate_f hand enumeration, b=1") {
    // bins around -0.5 and 0.5 are distinct for any jitter realization
    Matrix m_hat(2, 2);
    m_hat << -0.5, -0.5, 0.5, 0.5;
    mnar::Mask mask(2, 2);
    mask << true, false, true, true;
    auto f = mnar::estimate_f(mask, m_hat, 1, 5);
    REQUIRE(f(-0.5) == Catch::Approx(0.5));
    REQUIRE(f(0.5) == Catch::Approx(1.0));
}

TEST_CASE("estimate_f values are proportions in [0,1]") {
    Matrix m = mnar::generate_uniform_low_rank(100, 5, true, 3);
    auto obs = mnar::apply_missingness(m, m, mnar::MissingnessFn::quadratic(), 4);
    auto f = mnar::estimate_f(obs.mask, m, 10, 5);
    for (double v : f.values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("evaluate_piecewise boundary conventions") {
    // step function: 0 on [-1,0), 1 on [0,1]
    mnar::PiecewiseConstantFn step({-1.0, 0.0, 1.0}, {0.0, 1.0});
    REQUIRE(mnar::evaluate_piecewise(step, -1e-9) == 0.0);
    REQUIRE(mnar::evaluate_piecewise(step, 0.0) == 1.0);   // half-open left edge
    REQUIRE(mnar::evaluate_piecewise(step, 1.0) == 1.0);   // closed final edge
    REQUIRE(mnar::evaluate_piecewise(step, -1.0) == 0.0);
    REQUIRE_THROWS_AS(mnar::evaluate_piecewise(step, 1.5), std::out_of_range);
    REQUIRE_THROWS_AS(mnar::evaluate_piecewise(step, -1.5), std::out_of_range);

    mnar::PiecewiseConstantFn flat({-2.0, 2.0}, {0.3});
    REQUIRE(flat(-1.0) == 0.3);
    REQUIRE(flat(0.77) == 0.3);
}

TEST_CASE("PiecewiseConstantFn validation") {
    REQUIRE_THROWS_AS(mnar::PiecewiseConstantFn({0.0, 0.0}, {0.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(mnar::PiecewiseConstantFn({0.0, 1.0}, {1.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(mnar::PiecewiseConstantFn({0.0, 1.0}, {0.1, 0.2}),
                      std::invalid_argument);
}

TEST_CASE("integrated_sq_error") {
    mnar::PiecewiseConstantFn half({-2.0, 2.0}, {0.5});
    Matrix m = mnar::generate_uniform_low_rank(50, 4, true, 7);
    REQUIRE(mnar::integrated_sq_error(half, mnar::MissingnessFn::constant(0.5), m) ==
            0.0);
    REQUIRE(mnar::integrated_sq_error(half, mnar::MissingnessFn::constant(0.3), m) ==
            Catch::Approx(0.04));

    // f-hat = 0 against f(x) = 0.5x^2+0.3 on Uniform[-1,1] entries:
    // quadrature gives (1/2) * int (0.5x^2+0.3)^2 dx = 0.24
    mnar::PiecewiseConstantFn zero({-2.0, 2.0}, {0.0});
    Matrix big = mnar::generate_uniform_low_rank(700, 7, true, 8);
    REQUIRE(mnar::integrated_sq_error(zero, mnar::MissingnessFn::quadratic(), big) ==
            Catch::Approx(0.24).margin(0.01));
}

TEST_CASE("oracle plug-in ISE shrinks with n") {
    auto median_ise = [](int n, int nseeds) {
        std::vector<double> v;
        for (int s = 0; s < nseeds; ++s) {
            Matrix m = mnar::generate_uniform_low_rank(n, 7, true, 300 + s);
            auto obs =
                mnar::apply_missingness(m, m, mnar::MissingnessFn::quadratic(), 400 + s);
            auto f = mnar::estimate_f(obs.mask, m, 25, 500 + s);
            v.push_back(
                mnar::integrated_sq_error(f, mnar::MissingnessFn::quadratic(), m));
        }
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    REQUIRE(median_ise(500, 3) < median_ise(100, 3));
}
