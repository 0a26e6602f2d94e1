// Design of a recursive Erlang-weighted polynomial regression filter: turns
// the regression parameters into the frozen matrices used at runtime.
#pragma once

#include <optional>

#include <Eigen/Dense>

#include "lrf/erlang_weights.hpp"
#include "lrf/integrator_network.hpp"

namespace lrf {

struct DesignSpec {
    WeightSpec weight;
    int model_order = 1;        // K_X: polynomial degree + 1
    int derivative_count = 1;   // K_t: outputs 0..K_t-1
    std::optional<double> delay;  // q in samples; empty selects the VRF-optimal delay
    double sample_period = 1.0;   // T_s in seconds

    int first_moment_order() const { return weight.kappa() + model_order; }  // K_1
    int second_moment_order() const { return weight.kappa() + 1; }           // K_2

    /// Throws std::domain_error on inconsistent fields.
    void validate() const;
};

struct TransformSet {
    Eigen::MatrixXd overlap;          // S_phi, K_X x K_X
    Eigen::MatrixXd psi_from_phi;     // lower-triangular, L^-1
    Eigen::MatrixXd phi_from_psi;     // upper-triangular, L^-T
    Eigen::MatrixXd synthesis;        // D_q, K_t x K_X
    Eigen::MatrixXd first_moment_output;   // C_1, K_X x K_1
    Eigen::MatrixXd derivative_output;     // C_q, K_t x K_1
    Eigen::RowVectorXd second_moment_output;  // C_2, 1 x K_2
};

struct FilterRealization {
    DesignSpec spec;  // delay always resolved
    NetworkMatrices first_network;
    NetworkMatrices second_network;
    TransformSet transforms;
    Eigen::VectorXd first_rho;
    Eigen::VectorXd second_rho;
    double gamma;           // 1 / S_kappa(p)
    double residual_scale;  // 1 / (S_kappa(p) - tr(S_phi^-1 S_WphiWphi)), unbiased noise-variance normalizer
    Eigen::MatrixXd vrf;    // K_t x K_t

    double delay() const { return *spec.delay; }
};

/// Overlap matrices are rejected above this condition number.
inline constexpr double kMaxOverlapCondition = 1e12;

/// S_phi[a, b] = S_{a + b + kappa}(p).
Eigen::MatrixXd overlap_matrix(const DesignSpec& spec);

struct OrthonormalTransforms {
    Eigen::MatrixXd psi_from_phi;
    Eigen::MatrixXd phi_from_psi;
};

/// Cholesky factorization S = L L^T; returns (L^-1, L^-T). Throws
/// std::domain_error when the matrix is not numerically positive definite.
OrthonormalTransforms orthonormal_transforms(const Eigen::MatrixXd& overlap);

/// D_q[k_t, k_X] = (-1/T_s)^k_t * k_X! / (k_X - k_t)! * q^(k_X - k_t), zero for k_t > k_X.
Eigen::MatrixXd synthesis_matrix(const DesignSpec& spec, double delay);

/// All output matrices for a given delay (the delay in spec is ignored).
TransformSet build_transforms(const DesignSpec& spec, double delay);

/// Full realization. A missing delay is resolved through optimal_delay.
FilterRealization build_realization(const DesignSpec& spec);

}  // namespace lrf
