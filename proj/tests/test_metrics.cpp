#include <catch2/catch_amalgamated.hpp>

#include "mnar/metrics.hpp"
#include "mnar/obsmodel.hpp"

using mnar::Matrix;

TEST_CASE("mse basics") {
    Matrix m = mnar::generate_uniform_low_rank(20, 3, true, 1);
    REQUIRE(mnar::mse(m, m) == 0.0);
    REQUIRE(mnar::mse(m + Matrix::Constant(20, 20, 0.1), m) ==
            Catch::Approx(0.01));
    REQUIRE(mnar::mse(Matrix::Ones(5, 5), -Matrix::Ones(5, 5)) ==
            Catch::Approx(4.0));
    REQUIRE(mnar::mse(m, m + Matrix::Constant(20, 20, 0.1)) ==
            mnar::mse(m + Matrix::Constant(20, 20, 0.1), m));
    REQUIRE_THROWS_AS(mnar::mse(m, Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("rank_energy_curve basics") {
    Eigen::VectorXd u = Eigen::VectorXd::Ones(6);
    Matrix r1 = u * u.transpose();
    auto curve1 = mnar::rank_energy_curve(r1);
    for (double v : curve1) REQUIRE(v == Catch::Approx(1.0));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    auto curve2 = mnar::rank_energy_curve(d);
    REQUIRE(curve2[0] == Catch::Approx(0.9));
    REQUIRE(curve2[1] == Catch::Approx(1.0));

    auto curve3 = mnar::rank_energy_curve(Matrix::Identity(10, 10));
    for (int k = 0; k < 10; ++k)
        REQUIRE(curve3[std::size_t(k)] == Catch::Approx((k + 1) / 10.0));

    REQUIRE_THROWS_AS(mnar::rank_energy_curve(Matrix::Zero(4, 4)),
                      std::invalid_argument);
}

TEST_CASE("rank_energy_curve is nondecreasing and ends at 1") {
    Matrix m = mnar::generate_uniform_low_rank(60, 6, true, 5);
    auto curve = mnar::rank_energy_curve(m);
    for (std::size_t k = 1; k < curve.size(); ++k)
        REQUIRE(curve[k] >= curve[k - 1] - 1e-15);
    REQUIRE(curve.back() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("rank-7 truth reaches 0.999 energy by k=7") {
    Matrix m = mnar::generate_uniform_low_rank(100, 7, true, 9);
    auto curve = mnar::rank_energy_curve(m);
    REQUIRE(curve[6] >= 0.999);
}
