#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "semreg/kernel.hpp"

using namespace semreg;

TEST_CASE("gaussian kernel closed-form values") {
    KernelConfig cfg;  // sigma = 0.4
    Eigen::VectorXd x(2), y(2);
    x << 1.0, 2.0;
    y = x;
    CHECK(kernel_eval(cfg, x, y) == 1.0);

    y << 1.0, 2.4;  // distance 0.4 = sigma
    CHECK(kernel_eval(cfg, x, y) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    cfg.sigma = 1.0;
    y << 4.0, 6.0;  // squared distance 25
    CHECK(kernel_eval(cfg, x, y) == doctest::Approx(std::exp(-12.5)).epsilon(1e-12));
}

TEST_CASE("kernel symmetry and range on random pairs") {
    KernelConfig cfg;
    std::mt19937_64 rng(5);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4 - 2; };
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(3), y(3);
        for (int j = 0; j < 3; ++j) {
            x[j] = uniform();
            y[j] = uniform();
        }
        double k_xy = kernel_eval(cfg, x, y);
        CHECK(k_xy == kernel_eval(cfg, y, x));  // bitwise: same expression order
        CHECK(k_xy > 0.0);
        CHECK(k_xy <= 1.0);
        if (x != y) CHECK(k_xy < 1.0);
    }
}

TEST_CASE("kernel input validation") {
    KernelConfig cfg;
    Eigen::VectorXd x(2), y(3);
    x.setZero();
    y.setZero();
    CHECK_THROWS_AS(kernel_eval(cfg, x, y), Error);  // dimension mismatch
    Eigen::VectorXd bad(2);
    bad << 0.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(kernel_eval(cfg, x.eval(), bad), Error);
    KernelConfig zero_sigma;
    zero_sigma.sigma = 0.0;
    CHECK_THROWS_AS(zero_sigma.validate(), Error);
}

TEST_CASE("gram matrix of duplicate points is all ones") {
    KernelConfig cfg;
    Eigen::MatrixXd pts(2, 3);
    pts << 1, 2, 3, 1, 2, 3;
    Eigen::MatrixXd gram = build_gram(cfg, pts);
    CHECK(gram.rows() == 2);
    CHECK((gram.array() == 1.0).all());
}

TEST_CASE("gram matrix invariants on random samples") {
    KernelConfig cfg;
    std::mt19937_64 rng(11);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int n = 20;
    Eigen::MatrixXd pts(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 4; ++j) pts(i, j) = uniform() * 3;

    Eigen::MatrixXd gram = build_gram(cfg, pts);
    for (int i = 0; i < n; ++i) {
        CHECK(gram(i, i) == 1.0);
        for (int j = 0; j < n; ++j) {
            CHECK(gram(i, j) == gram(j, i));  // exact, not approximate
            CHECK(gram(i, j) == kernel_eval(cfg, pts.row(i).transpose(), pts.row(j).transpose()));
        }
    }

    // positive semidefinite within tolerance, via an eigenvalue oracle
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * n);

    // deterministic recomputation
    Eigen::MatrixXd again = build_gram(cfg, pts);
    CHECK(gram == again);
}

TEST_CASE("gram matrix rejects empty and inconsistent input") {
    KernelConfig cfg;
    Eigen::MatrixXd empty(0, 3);
    CHECK_THROWS_AS(build_gram(cfg, empty), Error);
    Eigen::MatrixXd bad(2, 2);
    bad << 0, 1, std::numeric_limits<double>::infinity(), 0;
    CHECK_THROWS_AS(build_gram(cfg, bad), Error);
}
