// Variance reduction factors: closed-form matrix, impulse-response (Parseval)
// cross-check and selection of the delay that minimises the smoother's VRF.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lrf/regression_design.hpp"

namespace lrf {

struct StationaryDelay {
    double delay;
    double vrf;
    bool is_minimum;
};

struct VrfReport {
    Eigen::MatrixXd vrf;  // at q_optimal
    double q_optimal;
    std::vector<StationaryDelay> candidates;  // ascending in delay
};

/// S_WphiWphi[a, b] = S_{a + b + 2 kappa}(p^2): the weight applied twice.
Eigen::MatrixXd squared_weight_overlap(const DesignSpec& spec);

/// VRF = C_phi S_WphiWphi C_phi^T with C_phi = D_q S_phi^-1.
Eigen::MatrixXd vrf_matrix(const DesignSpec& spec, const TransformSet& transforms);

/// VRF[k_t, k_t] as a function of an arbitrary delay q.
double vrf_at_delay(const DesignSpec& spec, double delay, int derivative = 0);

/// sum_m h_a[m] h_b[m] from the explicit impulse response C_q G^m H. The
/// horizon doubles until the latest block adds < 1e-12 of the running sum;
/// throws std::runtime_error past 1e6 samples.
double vrf_by_parseval(const FilterRealization& realization, int row_a, int row_b);

/// Impulse response rows h_k[m], m = 0..length-1 (K_t x length).
Eigen::MatrixXd impulse_response(const FilterRealization& realization, int length);

/// Stationary points of VRF[k_t, k_t](q) by companion-matrix roots of its
/// derivative; q_optimal is the local minimum with the least delay. When the
/// VRF does not depend on q the weight centroid is reported.
VrfReport optimal_delay(const DesignSpec& spec, int derivative = 0);

}  // namespace lrf
