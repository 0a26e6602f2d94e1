#include "lrf/streaming_estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrf {

namespace {

void require_finite(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite input sample");
}

}  // namespace

EstimatorState new_estimator(const FilterRealization& realization, double x0, double sigma0_sq) {
    require_finite(x0);
    if (!(sigma0_sq >= 0.0)) throw std::invalid_argument("initial noise variance must be >= 0");
    return EstimatorState{realization.first_rho * x0, realization.second_rho * (sigma0_sq + x0 * x0), 0};
}

EstimateFrame frame_from_states(const FilterRealization& realization, std::span<const double> first,
                                std::span<const double> second, long n) {
    const auto& t = realization.transforms;
    const auto k1 = t.first_moment_output.cols();
    const auto k2 = t.second_moment_output.cols();
    if (static_cast<Eigen::Index>(first.size()) < k1 || static_cast<Eigen::Index>(second.size()) < k2) {
        throw std::invalid_argument("recursion state shorter than the realization order");
    }
    const Eigen::Map<const Eigen::VectorXd> w1(first.data(), k1);
    const Eigen::Map<const Eigen::VectorXd> w2(second.data(), k2);

    EstimateFrame frame;
    frame.n = n;
    frame.estimates = t.derivative_output * w1;
    const Eigen::VectorXd beta = t.first_moment_output * w1;
    const double weighted_square = t.second_moment_output.dot(w2);
    // The residual is a difference of two large sums. Anything inside their
    // rounding noise (including negative values) is an exact fit.
    const double residual = weighted_square - beta.squaredNorm();
    frame.sigma_eps2 = residual > kResidualFloor * weighted_square ? realization.residual_scale * residual : 0.0;
    frame.covariance = frame.sigma_eps2 * realization.vrf;
    return frame;
}

EstimateFrame current_frame(const EstimatorState& state, const FilterRealization& realization) {
    return frame_from_states(realization, {state.first.data(), static_cast<std::size_t>(state.first.size())},
                             {state.second.data(), static_cast<std::size_t>(state.second.size())}, state.n);
}

EstimateFrame update(EstimatorState& state, const FilterRealization& realization, double x) {
    require_finite(x);
    const double p = realization.spec.weight.p();
    advance({state.first.data(), static_cast<std::size_t>(state.first.size())}, p, x);
    advance({state.second.data(), static_cast<std::size_t>(state.second.size())}, p, x * x);
    ++state.n;
    return current_frame(state, realization);
}

Coefficients coefficients(const EstimatorState& state, const FilterRealization& realization) {
    const auto& t = realization.transforms;
    Coefficients c;
    c.beta = t.first_moment_output * state.first;
    c.alpha = t.phi_from_psi * c.beta;
    return c;
}

StreamingEstimator::StreamingEstimator(std::shared_ptr<const FilterRealization> realization, double sigma0_sq)
    : realization_(std::move(realization)), sigma0_sq_(sigma0_sq) {
    if (!realization_) throw std::invalid_argument("estimator needs a realization");
    if (!(sigma0_sq >= 0.0)) throw std::invalid_argument("initial noise variance must be >= 0");
}

EstimateFrame StreamingEstimator::push(double x) {
    if (!state_) {
        state_ = new_estimator(*realization_, x, sigma0_sq_);
        return current_frame(*state_, *realization_);
    }
    return update(*state_, *realization_, x);
}

}  // namespace lrf
