// Cascade of leaky integrators (Laguerre network) in state-space form:
//   w[n] = G w[n-1] + H x[n]
// with G lower-triangular (p on and below the diagonal) and H a vector of ones.
#pragma once

#include <span>

#include <Eigen/Dense>

namespace lrf {

class NetworkMatrices {
public:
    /// Throws std::domain_error unless order >= 1 and 0 < p < 1.
    NetworkMatrices(int order, double p);

    int order() const { return order_; }
    double p() const { return p_; }
    const Eigen::MatrixXd& G() const { return G_; }
    const Eigen::VectorXd& H() const { return H_; }

private:
    int order_;
    double p_;
    Eigen::MatrixXd G_;
    Eigen::VectorXd H_;
};

struct StateVector {
    Eigen::VectorXd w;
    long n = 0;
};

inline NetworkMatrices build_network(int order, double p) { return NetworkMatrices(order, p); }

/// Largest order supported by impulse_to_weight_transform.
inline constexpr int kMaxTransformOrder = 16;

/// Integer lower-triangular T with sum_j T[k, j] * phi_j[m] = m^k p^m, where
/// phi_j[m] = C(m + j, j) p^m is the impulse response of state j.
Eigen::MatrixXd impulse_to_weight_transform(int order);

/// Unit-step steady state of every network state: rho_k = 1 / (1 - p)^(k + 1).
Eigen::VectorXd steady_state_vector(int order, double p);

/// In-place O(K) recursion on raw state storage: each state becomes
/// p * (sum of the old states up to and including itself) + x.
void advance(std::span<double> w, double p, double x);

/// O(K) update using the prefix-sum structure of G. Advances the counter.
void step(const NetworkMatrices& net, StateVector& state, double x);

/// Dense O(K^2) reference update, w = G w + H x.
void step_dense(const NetworkMatrices& net, StateVector& state, double x);

/// state = rho * x0, counter reset to zero.
StateVector initialize(const NetworkMatrices& net, double x0, const Eigen::VectorXd& rho);

}  // namespace lrf
