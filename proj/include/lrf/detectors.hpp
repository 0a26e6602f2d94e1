// Test-statistic detectors built on the streaming estimator: pulse edges
// (first derivative), peaks (negative curvature) and trend breaks (two
// weights sharing one feedback network).
#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lrf/regression_design.hpp"
#include "lrf/streaming_estimator.hpp"

namespace lrf {

enum class EventKind { RisingEdge, FallingEdge, Peak, BreakUp, BreakDown };

std::string_view to_string(EventKind kind);

struct DetectorOutput {
    long n = 0;
    double z = 0.0;
    std::optional<EventKind> event;
};

/// Variances below this are treated as "no information" and yield Z = 0.
inline constexpr double kMinStatisticVariance = 1e-15;

/// X^(1) / sigma_1. Requires K_t >= 2.
double edge_statistic(const EstimateFrame& frame);
/// -X^(2) / sigma_2. Requires K_t >= 3.
double peak_statistic(const EstimateFrame& frame);
/// (A - B) / sqrt(a^2 + b^2) on the k_t = 0 outputs of both frames.
double change_statistic(const EstimateFrame& a, const EstimateFrame& b);

/// Turns a Z sequence into events: one event per contiguous threshold
/// exceedance run, placed at the run's extremum. Samples inside an open run
/// are held back until the run closes, so output order equals input order.
class ExceedanceEvents {
public:
    /// below_kind empty means only Z > threshold is considered.
    ExceedanceEvents(double threshold, EventKind above_kind, std::optional<EventKind> below_kind);

    std::vector<DetectorOutput> push(long n, double z);
    std::vector<DetectorOutput> finish();

private:
    int classify(double z) const;
    void close_run(std::vector<DetectorOutput>& out);

    double threshold_;
    EventKind above_kind_;
    std::optional<EventKind> below_kind_;
    int run_sign_ = 0;
    std::vector<DetectorOutput> run_;
};

class EdgeDetector {
public:
    EdgeDetector(std::shared_ptr<const FilterRealization> realization, double threshold, double sigma0_sq = 0.0);
    std::vector<DetectorOutput> push(double x);
    std::vector<DetectorOutput> finish() { return events_.finish(); }

private:
    StreamingEstimator estimator_;
    ExceedanceEvents events_;
};

class PeakDetector {
public:
    PeakDetector(std::shared_ptr<const FilterRealization> realization, double threshold, double sigma0_sq = 0.0);
    std::vector<DetectorOutput> push(double x);
    std::vector<DetectorOutput> finish() { return events_.finish(); }

private:
    StreamingEstimator estimator_;
    ExceedanceEvents events_;
};

struct ChangeDetectorConfig {
    DesignSpec filter_a;  // emphasises new data (small kappa)
    DesignSpec filter_b;  // emphasises old data (larger kappa)
    std::optional<double> common_delay;  // empty: filter A's optimal delay
    double threshold = 3.0;
};

/// Both filters read one shared pair of recursions of the larger order; the
/// smaller filter uses the leading states, which evolve identically.
class ChangeDetector {
public:
    using RealizationPair =
        std::pair<std::shared_ptr<const FilterRealization>, std::shared_ptr<const FilterRealization>>;

    explicit ChangeDetector(const ChangeDetectorConfig& config, double sigma0_sq = 0.0);
    /// From prebuilt realizations; they must satisfy the pairing rules.
    ChangeDetector(std::shared_ptr<const FilterRealization> a, std::shared_ptr<const FilterRealization> b,
                   double threshold, double sigma0_sq = 0.0);

    std::vector<DetectorOutput> push(double x);
    std::vector<DetectorOutput> finish() { return events_.finish(); }

    const FilterRealization& filter_a() const { return *a_; }
    const FilterRealization& filter_b() const { return *b_; }
    /// Frames of both filters for the latest sample.
    const std::optional<std::pair<EstimateFrame, EstimateFrame>>& last_frames() const { return last_; }

private:
    ChangeDetector(RealizationPair pair, double threshold, double sigma0_sq);
    void init_shared();

    std::shared_ptr<const FilterRealization> a_;
    std::shared_ptr<const FilterRealization> b_;
    double sigma0_sq_;
    ExceedanceEvents events_;
    Eigen::VectorXd first_rho_;
    Eigen::VectorXd second_rho_;
    std::optional<EstimatorState> state_;
    std::optional<std::pair<EstimateFrame, EstimateFrame>> last_;
};

/// Validates the pairing rules: shared p, K_X, T_s and delay; distinct kappa.
void check_change_pair(const FilterRealization& a, const FilterRealization& b);

}  // namespace lrf
