#include "lrf/integrator_network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrf {

namespace {

__extension__ using Int = __int128;

Int binomial(int n, int k) {
    Int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Int ipow(int base, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void check_dims(const NetworkMatrices& net, const StateVector& state) {
    if (state.w.size() != net.order()) {
        throw std::invalid_argument("state length " + std::to_string(state.w.size()) +
                                    " does not match network order " + std::to_string(net.order()));
    }
}

}  // namespace

NetworkMatrices::NetworkMatrices(int order, double p) : order_(order), p_(p) {
    if (order < 1) throw std::domain_error("network order must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("smoothing parameter p must lie in (0, 1)");
    G_ = Eigen::MatrixXd::Zero(order, order);
    for (int r = 0; r < order; ++r) {
        for (int c = 0; c <= r; ++c) G_(r, c) = p;
    }
    H_ = Eigen::VectorXd::Ones(order);
}

Eigen::MatrixXd impulse_to_weight_transform(int order) {
    if (order < 1 || order > kMaxTransformOrder) {
        throw std::domain_error("transform order must lie in [1, " + std::to_string(kMaxTransformOrder) + "]");
    }
    // T[k, j] = (-1)^(k-j) j! S(k+1, j+1), S the Stirling numbers of the second kind.
    std::vector<std::vector<Int>> stirling(order + 2, std::vector<Int>(order + 2, 0));
    stirling[0][0] = 1;
    for (int n = 1; n <= order; ++n) {
        for (int k = 1; k <= n; ++k) stirling[n][k] = k * stirling[n - 1][k] + stirling[n - 1][k - 1];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(order, order);
    for (int k = 0; k < order; ++k) {
        Int factorial = 1;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) factorial *= j;
            const Int v = factorial * stirling[k + 1][j + 1];
            T(k, j) = static_cast<double>((k - j) % 2 ? -v : v);
        }
        // Exact check of m^k = sum_j T[k, j] C(m + j, j) at m = 0..K-1, which
        // pins down both degree < K polynomials.
        for (int m = 0; m < order; ++m) {
            Int acc = 0;
            for (int j = 0; j <= k; ++j) acc += static_cast<Int>(static_cast<long long>(T(k, j))) * binomial(m + j, j);
            if (acc != ipow(m, k)) throw std::runtime_error("impulse-to-weight transform failed exact verification");
        }
    }
    return T;
}

Eigen::VectorXd steady_state_vector(int order, double p) {
    if (order < 1) throw std::domain_error("network order must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("smoothing parameter p must lie in (0, 1)");
    Eigen::VectorXd rho(order);
    const double gain = 1.0 / (1.0 - p);
    double v = gain;
    for (int k = 0; k < order; ++k) {
        rho(k) = v;
        v *= gain;
    }
    return rho;
}

void advance(std::span<double> w, double p, double x) {
    double prefix = 0.0;
    for (double& v : w) {
        prefix += v;
        v = p * prefix + x;
    }
}

void step(const NetworkMatrices& net, StateVector& state, double x) {
    check_dims(net, state);
    advance({state.w.data(), static_cast<std::size_t>(state.w.size())}, net.p(), x);
    ++state.n;
}

void step_dense(const NetworkMatrices& net, StateVector& state, double x) {
    check_dims(net, state);
    state.w = net.G() * state.w + net.H() * x;
    ++state.n;
}

StateVector initialize(const NetworkMatrices& net, double x0, const Eigen::VectorXd& rho) {
    if (rho.size() != net.order()) throw std::invalid_argument("rho length does not match network order");
    return StateVector{rho * x0, 0};
}

}  // namespace lrf
