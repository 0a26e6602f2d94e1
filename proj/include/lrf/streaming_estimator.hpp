// Online runtime: first/second-moment recursions, derivative outputs, the
// residual-based noise-variance estimate and the derivative covariance.
#pragma once

#include <memory>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "lrf/regression_design.hpp"

namespace lrf {

/// Residuals below this fraction of the weighted second moment are reported
/// as sigma_eps2 = 0.
inline constexpr double kResidualFloor = 1e-12;

struct EstimatorState {
    Eigen::VectorXd first;   // w1, length K_1, driven by x
    Eigen::VectorXd second;  // w2, length K_2, driven by x^2
    long n = 0;
};

struct EstimateFrame {
    long n = 0;
    Eigen::VectorXd estimates;   // k_t-th derivative at t = (n - q) T_s
    double sigma_eps2 = 0.0;     // measurement-noise variance estimate
    Eigen::MatrixXd covariance;  // sigma_eps2 * VRF

    double variance(int k) const { return covariance(k, k); }
};

struct Coefficients {
    Eigen::VectorXd beta;   // orthonormal-basis coefficients
    Eigen::VectorXd alpha;  // monomial coefficients in m (m = 0 newest, increasing into the past)
};

/// w1 = rho1 x0, w2 = rho2 (sigma0_sq + x0^2), n = 0. Throws
/// std::invalid_argument on negative sigma0_sq or non-finite input.
EstimatorState new_estimator(const FilterRealization& realization, double x0, double sigma0_sq = 0.0);

/// Advances both recursions by one sample and returns the frame for it.
/// Non-finite samples are rejected with std::invalid_argument before the
/// state is touched.
EstimateFrame update(EstimatorState& state, const FilterRealization& realization, double x);

/// Frame for the current state without advancing it.
EstimateFrame current_frame(const EstimatorState& state, const FilterRealization& realization);

/// Frame from raw recursion states. Only the leading K_1 / K_2 entries are
/// read, so states of a larger shared network may be passed directly.
EstimateFrame frame_from_states(const FilterRealization& realization, std::span<const double> first,
                                std::span<const double> second, long n);

Coefficients coefficients(const EstimatorState& state, const FilterRealization& realization);

/// Convenience wrapper: the first pushed sample initializes the recursions.
class StreamingEstimator {
public:
    explicit StreamingEstimator(std::shared_ptr<const FilterRealization> realization, double sigma0_sq = 0.0);

    EstimateFrame push(double x);

    const FilterRealization& realization() const { return *realization_; }
    const std::optional<EstimatorState>& state() const { return state_; }

private:
    std::shared_ptr<const FilterRealization> realization_;
    double sigma0_sq_;
    std::optional<EstimatorState> state_;
};

}  // namespace lrf
