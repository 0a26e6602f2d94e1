#include "lrf/regression_design.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrf/variance_analysis.hpp"

namespace lrf {

void DesignSpec::validate() const {
    if (model_order < 1) throw std::domain_error("model order K_X must be >= 1");
    if (derivative_count < 1 || derivative_count > model_order) {
        throw std::domain_error("derivative count K_t must lie in [1, K_X]");
    }
    if (!(sample_period > 0.0)) throw std::domain_error("sample period T_s must be > 0");
    if (delay && !std::isfinite(*delay)) throw std::domain_error("delay q must be finite");
    const int kappa = weight.kappa();
    if (first_moment_order() > kMaxTransformOrder) {
        throw std::domain_error("kappa + K_X exceeds the supported network order " +
                                std::to_string(kMaxTransformOrder));
    }
    if (2 * (model_order - 1) + 2 * kappa > kErlangSumMaxOrder) {
        throw std::domain_error("2 (K_X - 1) + 2 kappa exceeds the supported sum order " +
                                std::to_string(kErlangSumMaxOrder));
    }
}

Eigen::MatrixXd overlap_matrix(const DesignSpec& spec) {
    const int kx = spec.model_order;
    Eigen::MatrixXd s(kx, kx);
    for (int a = 0; a < kx; ++a) {
        for (int b = 0; b < kx; ++b) s(a, b) = erlang_sum(a + b + spec.weight.kappa(), spec.weight.p());
    }
    return s;
}

OrthonormalTransforms orthonormal_transforms(const Eigen::MatrixXd& overlap) {
    if (overlap.rows() != overlap.cols() || overlap.rows() == 0) {
        throw std::invalid_argument("overlap matrix must be square and non-empty");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(overlap);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("overlap matrix is not numerically positive definite");
    }
    const auto n = overlap.rows();
    const Eigen::MatrixXd lower = llt.matrixL();
    Eigen::MatrixXd psi_from_phi =
        lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd phi_from_psi = psi_from_phi.transpose();
    return {std::move(psi_from_phi), std::move(phi_from_psi)};
}

Eigen::MatrixXd synthesis_matrix(const DesignSpec& spec, double delay) {
    const int kt = spec.derivative_count;
    const int kx = spec.model_order;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(kt, kx);
    const double base = -1.0 / spec.sample_period;
    for (int r = 0; r < kt; ++r) {
        const double scale = std::pow(base, r);
        for (int c = r; c < kx; ++c) {
            double falling = 1.0;  // c! / (c - r)!
            for (int i = 0; i < r; ++i) falling *= c - i;
            d(r, c) = scale * falling * std::pow(delay, c - r);
        }
    }
    return d;
}

TransformSet build_transforms(const DesignSpec& spec, double delay) {
    spec.validate();
    const int kappa = spec.weight.kappa();
    const int kx = spec.model_order;
    const int k1 = spec.first_moment_order();
    const int k2 = spec.second_moment_order();

    TransformSet t;
    t.overlap = overlap_matrix(spec);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t.overlap, Eigen::EigenvaluesOnly);
    const double cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    if (!(eig.eigenvalues().minCoeff() > 0.0) || cond > kMaxOverlapCondition) {
        std::ostringstream msg;
        msg << "ill-conditioned design (overlap condition " << cond << " > " << kMaxOverlapCondition
            << ") for kappa=" << kappa << ", p=" << spec.weight.p() << ", K_X=" << kx;
        throw std::domain_error(msg.str());
    }

    auto ortho = orthonormal_transforms(t.overlap);
    t.psi_from_phi = std::move(ortho.psi_from_phi);
    t.phi_from_psi = std::move(ortho.phi_from_psi);
    t.synthesis = synthesis_matrix(spec, delay);

    // Selecting rows kappa..kappa+K_X-1 of the K_1 weight transform yields the
    // monomial projections sum_m m^(k + kappa) p^m x[n - m].
    const Eigen::MatrixXd weight_from_state = impulse_to_weight_transform(k1);
    t.first_moment_output = t.psi_from_phi * weight_from_state.middleRows(kappa, kx);
    t.derivative_output = t.synthesis * t.phi_from_psi * t.first_moment_output;
    t.second_moment_output = impulse_to_weight_transform(k2).row(k2 - 1);
    return t;
}

FilterRealization build_realization(const DesignSpec& spec) {
    spec.validate();
    DesignSpec resolved = spec;
    if (!resolved.delay) resolved.delay = optimal_delay(spec).q_optimal;

    const double p = spec.weight.p();
    const int kappa = spec.weight.kappa();
    const int k1 = resolved.first_moment_order();
    const int k2 = resolved.second_moment_order();

    TransformSet transforms = build_transforms(resolved, *resolved.delay);
    Eigen::MatrixXd vrf = vrf_matrix(resolved, transforms);

    const double weight_sum = erlang_sum(kappa, p);
    const Eigen::MatrixXd inverse_overlap = transforms.phi_from_psi * transforms.psi_from_phi;
    const double fitted_share = (inverse_overlap * squared_weight_overlap(resolved)).trace();

    return FilterRealization{
        resolved,
        NetworkMatrices(k1, p),
        NetworkMatrices(k2, p),
        std::move(transforms),
        steady_state_vector(k1, p),
        steady_state_vector(k2, p),
        1.0 / weight_sum,
        1.0 / (weight_sum - fitted_share),
        std::move(vrf),
    };
}

}  // namespace lrf
