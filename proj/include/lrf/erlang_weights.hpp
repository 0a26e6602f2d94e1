// Erlang weight family w[m] = m^kappa * p^m: infinite sums, moments and
// time/frequency dispersion of the continuous-time Erlang pulse.
#pragma once

#include <optional>

namespace lrf {

/// Shape/smoothing pair of an Erlang weight. Construct through make().
class WeightSpec {
public:
    /// Throws std::domain_error unless 0 < p < 1 and kappa >= 0.
    static WeightSpec make(int kappa, double p);

    int kappa() const { return kappa_; }
    double p() const { return p_; }
    /// Timescale in samples, -1/ln(p).
    double lambda() const { return lambda_; }

private:
    WeightSpec(int kappa, double p, double lambda) : kappa_(kappa), p_(p), lambda_(lambda) {}
    int kappa_;
    double p_;
    double lambda_;
};

struct WeightMoments {
    double mean;      // samples
    double variance;  // samples^2
    double skew;
};

struct DispersionReport {
    double sigma_t;                     // seconds
    std::optional<double> sigma_omega;  // rad/s, kappa >= 3 only
    std::optional<double> product;
};

/// Highest order with a transcribed closed form.
inline constexpr int kClosedFormMaxOrder = 10;
/// Highest order accepted by erlang_sum.
inline constexpr int kErlangSumMaxOrder = 20;

/// S_k(p) = sum_{m>=0} p^m m^k. Closed forms up to k = 10, truncated sum above.
double erlang_sum(int k, double p);

/// Truncated direct summation; stops when a term falls below 1e-16 of the
/// running total (hard cap of 1e7 terms).
double erlang_sum_numeric(int k, double p);

/// 1 / S_k(p).
double normalizer(int k, double p);

/// Mean, variance and skew of the continuous Erlang weight.
WeightMoments weight_moments(const WeightSpec& spec);

/// Time dispersion from the continuous-time variance; frequency dispersion by
/// numeric moments of the Laplace magnitude on the imaginary axis.
DispersionReport dispersion(const WeightSpec& spec, double sample_period);

}  // namespace lrf
