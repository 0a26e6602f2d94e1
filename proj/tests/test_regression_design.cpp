#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "lrf/regression_design.hpp"
#include "lrf/streaming_estimator.hpp"
#include "lrf/variance_analysis.hpp"
#include "oracles.hpp"

using doctest::Approx;
using namespace lrf;

namespace {

DesignSpec make_spec(int kx, int kappa, double p, std::optional<double> q = std::nullopt, int kt = 1, double ts = 1.0) {
    return DesignSpec{.weight = WeightSpec::make(kappa, p),
                      .model_order = kx,
                      .derivative_count = kt,
                      .delay = q,
                      .sample_period = ts};
}

}  // namespace

TEST_SUITE("regression_design") {

TEST_CASE("spec validation") {
    CHECK_NOTHROW(make_spec(3, 2, 0.8, 1.0, 3).validate());
    CHECK(make_spec(3, 2, 0.8).first_moment_order() == 5);
    CHECK(make_spec(3, 2, 0.8).second_moment_order() == 3);
    CHECK_THROWS_AS(make_spec(2, 0, 0.8, 1.0, 3).validate(), std::domain_error);
    CHECK_THROWS_AS(make_spec(2, 0, 0.8, 1.0, 0).validate(), std::domain_error);
    CHECK_THROWS_AS(make_spec(0, 0, 0.8, 1.0, 1).validate(), std::domain_error);
    CHECK_THROWS_AS(make_spec(2, 0, 0.8, 1.0, 1, 0.0).validate(), std::domain_error);
    CHECK_THROWS_AS(make_spec(2, 0, 0.8, std::nan(""), 1).validate(), std::domain_error);
    CHECK_THROWS_AS(make_spec(3, 9, 0.8, 1.0, 1).validate(), std::domain_error);
}

TEST_CASE("overlap matrix") {
    CHECK(overlap_matrix(make_spec(1, 0, 0.8))(0, 0) == Approx(5.0));
    const auto s = overlap_matrix(make_spec(2, 0, 0.5));
    CHECK(s(0, 0) == Approx(2.0));
    CHECK(s(0, 1) == Approx(2.0));
    CHECK(s(1, 0) == Approx(2.0));
    CHECK(s(1, 1) == Approx(6.0));
    const auto s3 = overlap_matrix(make_spec(3, 2, 0.7));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(s3(a, b) == Approx(static_cast<double>(oracle::brute_sum(a + b + 2, 0.7))).epsilon(1e-10));
        }
    }
}

TEST_CASE("orthonormalizing transforms") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 5.0);
    const auto t1 = orthonormal_transforms(one);
    CHECK(t1.psi_from_phi(0, 0) == Approx(1.0 / std::sqrt(5.0)));
    CHECK(t1.phi_from_psi(0, 0) == Approx(1.0 / std::sqrt(5.0)));

    for (int kx = 1; kx <= 4; ++kx) {
        const auto s = overlap_matrix(make_spec(kx, 1, 0.85));
        const auto t = orthonormal_transforms(s);
        const Eigen::MatrixXd id = t.psi_from_phi * s * t.psi_from_phi.transpose();
        CHECK((id - Eigen::MatrixXd::Identity(kx, kx)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(t.psi_from_phi.isLowerTriangular());
        CHECK(t.phi_from_psi.isUpperTriangular());
    }

    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(orthonormal_transforms(indefinite), std::domain_error);
}

TEST_CASE("orthonormal basis is a discrete Laguerre family") {
    const auto spec = make_spec(3, 0, 0.8);
    const auto t = orthonormal_transforms(overlap_matrix(spec));
    Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
    for (int m = 0; m < 400; ++m) {
        Eigen::Vector3d mono(1.0, m, double(m) * m);
        const Eigen::Vector3d psi = t.psi_from_phi * mono;
        gram += std::pow(0.8, m) * psi * psi.transpose();
    }
    CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("synthesis matrix") {
    const auto d0 = synthesis_matrix(make_spec(3, 0, 0.8, 0.0, 1), 0.0);
    CHECK(d0(0, 0) == 1.0);
    CHECK(d0(0, 1) == 0.0);
    CHECK(d0(0, 2) == 0.0);
    const auto d = synthesis_matrix(make_spec(2, 0, 0.8, 2.0, 1), 2.0);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(0, 1) == 2.0);
    const auto d3 = synthesis_matrix(make_spec(3, 0, 0.8, 8.5, 3, 0.01), 8.5);
    CHECK(d3(1, 0) == 0.0);
    CHECK(d3(2, 0) == 0.0);
    CHECK(d3(2, 1) == 0.0);
    CHECK(d3(1, 1) == Approx(-100.0));
    CHECK(d3(1, 2) == Approx(-100.0 * 2 * 8.5));
    CHECK(d3(2, 2) == Approx(10000.0 * 2));
}

TEST_CASE("single-state design collapses to the exponential moving average") {
    const auto r = build_realization(make_spec(1, 0, 0.8, 0.0));
    const auto h = impulse_response(r, 60);
    for (int m = 0; m < 60; ++m) CHECK(h(0, m) == Approx(0.2 * std::pow(0.8, m)).epsilon(1e-12));
    CHECK(r.gamma == Approx(0.2));
    CHECK(r.first_rho.size() == 1);
    CHECK(r.second_network.order() == 1);
}

TEST_CASE("realization fields") {
    const auto r = build_realization(make_spec(3, 2, 0.8, std::nullopt, 3));
    CHECK(r.spec.delay.has_value());
    CHECK(r.delay() == Approx(12.386).epsilon(1e-4));
    CHECK(r.first_network.order() == 5);
    CHECK(r.second_network.order() == 3);
    CHECK(r.transforms.first_moment_output.rows() == 3);
    CHECK(r.transforms.first_moment_output.cols() == 5);
    CHECK(r.transforms.derivative_output.rows() == 3);
    CHECK(r.transforms.second_moment_output.size() == 3);
    CHECK((r.vrf - r.vrf.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < 3; ++k) CHECK(r.vrf(k, k) > 0.0);

    // Second-moment output recovers sum m^kappa p^m y[m] from the kappa+1 states.
    const Eigen::MatrixXd t = impulse_to_weight_transform(3);
    CHECK(r.transforms.second_moment_output == t.row(2));
}

TEST_CASE("DC gains of the outputs") {
    for (int kappa : {0, 2}) {
        const auto r = build_realization(make_spec(3, kappa, 0.8, std::nullopt, 3, 0.5));
        const auto h = impulse_response(r, 3000);
        CHECK(h.row(0).sum() == Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(h.row(1).sum()) < 1e-8);
        CHECK(std::abs(h.row(2).sum()) < 1e-8);
    }
}

TEST_CASE("unit-slope ramp yields a positive first derivative") {
    const auto r = std::make_shared<const FilterRealization>(build_realization(make_spec(3, 0, 0.8, 8.5, 2, 0.01)));
    StreamingEstimator est(r);
    const double a = 3.0;
    const double b = 1.0;  // units per second
    EstimateFrame f;
    for (int n = 0; n < 600; ++n) f = est.push(a + b * n * 0.01);
    CHECK(std::abs(f.estimates(1) - b) < 1e-6);
    CHECK(f.estimates(0) == Approx(a + b * (599 - 8.5) * 0.01).epsilon(1e-9));
}

TEST_CASE("polynomial reproduction after the transient") {
    for (int kappa : {0, 1, 3}) {
        const double ts = 0.1;
        const double q = 4.25;
        const auto r = std::make_shared<const FilterRealization>(build_realization(make_spec(3, kappa, 0.75, q, 3, ts)));
        StreamingEstimator est(r);
        // x(t) = 2 - 0.5 t + 0.3 t^2 sampled at t = n T_s.
        EstimateFrame f;
        const int n_last = 1000;
        for (int n = 0; n <= n_last; ++n) {
            const double t = n * ts;
            f = est.push(2.0 - 0.5 * t + 0.3 * t * t);
        }
        const double t = (n_last - q) * ts;
        CHECK(f.estimates(0) == Approx(2.0 - 0.5 * t + 0.3 * t * t).epsilon(1e-6));
        CHECK(f.estimates(1) == Approx(-0.5 + 0.6 * t).epsilon(1e-6));
        CHECK(f.estimates(2) == Approx(0.6).epsilon(1e-6));
    }
}

TEST_CASE("conditioning guard names the design") {
    try {
        build_realization(make_spec(9, 0, 0.99, 0.0));
        FAIL("expected rejection");
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("kappa=0") != std::string::npos);
        CHECK(msg.find("K_X=9") != std::string::npos);
    }
}

}
