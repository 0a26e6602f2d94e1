#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "lrf/integrator_network.hpp"
#include "oracles.hpp"

using doctest::Approx;
using namespace lrf;

TEST_SUITE("integrator_network") {

TEST_CASE("network matrices") {
    const NetworkMatrices one(1, 0.8);
    CHECK(one.G()(0, 0) == 0.8);
    CHECK(one.H()(0) == 1.0);

    const NetworkMatrices net(4, 0.3);
    for (int r = 0; r < 4; ++r) {
        CHECK(net.H()(r) == 1.0);
        for (int c = 0; c < 4; ++c) CHECK(net.G()(r, c) == (c <= r ? 0.3 : 0.0));
    }
    // Triangular, so the eigenvalues are the diagonal entries.
    CHECK(net.G().isLowerTriangular());
    CHECK((net.G().diagonal().array() == 0.3).all());

    CHECK_THROWS_AS(NetworkMatrices(0, 0.5), std::domain_error);
    CHECK_THROWS_AS(NetworkMatrices(3, 1.0), std::domain_error);
}

TEST_CASE("impulse through a two-stage cascade") {
    // Unrolled by hand: stage 0 gives p^n, stage 1 gives (n + 1) p^n.
    const NetworkMatrices net(2, 0.5);
    StateVector s{Eigen::VectorXd::Zero(2), 0};
    step(net, s, 1.0);
    step(net, s, 0.0);
    step(net, s, 0.0);
    CHECK(s.w(0) == Approx(0.25));
    CHECK(s.w(1) == Approx(0.75));
    CHECK(s.n == 3);
}

TEST_CASE("tabulated transform") {
    const int table[6][6] = {
        {1, 0, 0, 0, 0, 0},      {-1, 1, 0, 0, 0, 0},        {1, -3, 2, 0, 0, 0},
        {-1, 7, -12, 6, 0, 0},   {1, -15, 50, -60, 24, 0},   {-1, 31, -180, 390, -360, 120},
    };
    const auto t = impulse_to_weight_transform(6);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) CHECK(t(r, c) == table[r][c]);
    }
    const auto t3 = impulse_to_weight_transform(3);
    CHECK(t3 == t.topLeftCorner(3, 3));
    CHECK_THROWS_AS(impulse_to_weight_transform(0), std::domain_error);
    CHECK_THROWS_AS(impulse_to_weight_transform(kMaxTransformOrder + 1), std::domain_error);
}

TEST_CASE("transform maps simulated impulse responses onto monomial weights") {
    for (int order : {4, 6}) {
        for (double p : {0.6, 0.7, 0.8, 0.9}) {
            const NetworkMatrices net(order, p);
            const auto t = impulse_to_weight_transform(order);
            StateVector s{Eigen::VectorXd::Zero(order), 0};
            for (int m = 0; m <= 200; ++m) {
                step(net, s, m == 0 ? 1.0 : 0.0);
                const Eigen::VectorXd w = t * s.w;
                for (int k = 0; k < order; ++k) {
                    CHECK(std::abs(w(k) - std::pow(m, k) * std::pow(p, m)) < 1e-9 * std::max(1.0, std::pow(m, k) * std::pow(p, m)));
                }
            }
        }
    }
}

TEST_CASE("binomial-form stage responses") {
    const NetworkMatrices net(5, 0.85);
    StateVector s{Eigen::VectorXd::Zero(5), 0};
    for (int m = 0; m < 60; ++m) {
        step(net, s, m == 0 ? 1.0 : 0.0);
        for (int j = 0; j < 5; ++j) CHECK(s.w(j) == Approx(oracle::stage_impulse(j, m, 0.85)).epsilon(1e-12));
    }
}

TEST_CASE("higher-order transforms satisfy the monomial identity") {
    const auto t = impulse_to_weight_transform(kMaxTransformOrder);
    for (int k = 0; k < kMaxTransformOrder; ++k) {
        for (int m = 0; m < 25; ++m) {
            long double acc = 0;
            for (int j = 0; j <= k; ++j) acc += t(k, j) * oracle::stage_impulse(j, m, 1.0);
            CHECK(std::abs(static_cast<double>(acc) - std::pow(m, k)) <= 1e-9 * std::max(1.0, std::pow(m, k)));
        }
    }
}

TEST_CASE("steady state equals the numeric final value") {
    const auto rho = steady_state_vector(3, 0.8);
    const NetworkMatrices net(3, 0.8);
    StateVector s{Eigen::VectorXd::Zero(3), 0};
    for (int i = 0; i < 5000; ++i) step(net, s, 1.0);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(rho(k) - s.w(k)) / s.w(k) < 1e-8);

    // Final values 1/(1-p)^(k+1); the exponent k alone would give [1, 2, 4, 8].
    const auto r4 = steady_state_vector(4, 0.5);
    CHECK(r4(0) == 2.0);
    CHECK(r4(1) == 4.0);
    CHECK(r4(2) == 8.0);
    CHECK(r4(3) == 16.0);
    CHECK(std::isfinite(steady_state_vector(1, 1e-9)(0)));
}

TEST_CASE("single step") {
    const NetworkMatrices net(1, 0.8);
    StateVector s{Eigen::VectorXd::Constant(1, 2.0), 0};
    step(net, s, 1.0);
    CHECK(s.w(0) == Approx(2.6));

    const NetworkMatrices net3(3, 0.5);
    StateVector z{Eigen::VectorXd::Zero(3), 0};
    step(net3, z, 0.0);
    CHECK(z.w.isZero());

    StateVector bad{Eigen::VectorXd::Zero(2), 0};
    CHECK_THROWS_AS(step(net3, bad, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(step_dense(net3, bad, 1.0), std::invalid_argument);
}

TEST_CASE("prefix-sum update matches the dense recursion") {
    const NetworkMatrices net(3, 0.9);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise;
    StateVector fast{Eigen::VectorXd::Zero(3), 0};
    StateVector dense = fast;
    for (int i = 0; i < 100; ++i) {
        const double x = noise(rng);
        step(net, fast, x);
        step_dense(net, dense, x);
    }
    CHECK((fast.w - dense.w).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fast.n == dense.n);
}

TEST_CASE("initialization removes the start-up transient") {
    const NetworkMatrices net(2, 0.5);
    const auto rho = steady_state_vector(2, 0.5);
    CHECK(initialize(net, 0.0, rho).w.isZero());
    const auto s3 = initialize(net, 3.0, rho);
    CHECK(s3.w(0) == 6.0);
    CHECK(s3.w(1) == 12.0);
    CHECK(s3.n == 0);

    const NetworkMatrices net4(4, 0.9);
    const auto rho4 = steady_state_vector(4, 0.9);
    auto s = initialize(net4, 7.5, rho4);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        step(net4, s, 7.5);
        worst = std::max(worst, ((s.w - rho4 * 7.5).array() / (rho4 * 7.5).array()).abs().maxCoeff());
    }
    CHECK(worst < 1e-9);
    CHECK_THROWS_AS(initialize(net4, 1.0, rho), std::invalid_argument);
}

TEST_CASE("bounded input stays inside the constant-input envelope") {
    const NetworkMatrices net(3, 0.8);
    const auto rho = steady_state_vector(3, 0.8);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StateVector s{Eigen::VectorXd::Zero(3), 0};
    bool inside = true;
    for (int i = 0; i < 100000; ++i) {
        step(net, s, u(rng));
        for (int k = 0; k < 3; ++k) inside = inside && std::abs(s.w(k)) <= rho(k) + 1e-6;
    }
    CHECK(inside);
}

}
