#include "lrf/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace lrf {

namespace {

double guarded_ratio(double numerator, double variance) {
    if (!(variance >= kMinStatisticVariance)) return 0.0;
    return numerator / std::sqrt(variance);
}

void require_outputs(const FilterRealization& r, int needed, const char* what) {
    if (r.spec.derivative_count < needed) {
        throw std::invalid_argument(std::string(what) + " detector needs K_t >= " + std::to_string(needed));
    }
}

}  // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::RisingEdge: return "rising-edge";
        case EventKind::FallingEdge: return "falling-edge";
        case EventKind::Peak: return "peak";
        case EventKind::BreakUp: return "break-up";
        case EventKind::BreakDown: return "break-down";
    }
    return "";
}

double edge_statistic(const EstimateFrame& frame) {
    if (frame.estimates.size() < 2) throw std::invalid_argument("edge statistic needs K_t >= 2");
    return guarded_ratio(frame.estimates(1), frame.variance(1));
}

double peak_statistic(const EstimateFrame& frame) {
    if (frame.estimates.size() < 3) throw std::invalid_argument("peak statistic needs K_t >= 3");
    return guarded_ratio(-frame.estimates(2), frame.variance(2));
}

double change_statistic(const EstimateFrame& a, const EstimateFrame& b) {
    if (a.n != b.n) throw std::invalid_argument("change statistic needs frames from the same sample");
    return guarded_ratio(a.estimates(0) - b.estimates(0), a.variance(0) + b.variance(0));
}

ExceedanceEvents::ExceedanceEvents(double threshold, EventKind above_kind, std::optional<EventKind> below_kind)
    : threshold_(threshold), above_kind_(above_kind), below_kind_(below_kind) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("detection threshold must be >= 0");
}

int ExceedanceEvents::classify(double z) const {
    if (z > threshold_) return 1;
    if (below_kind_ && z < -threshold_) return -1;
    return 0;
}

void ExceedanceEvents::close_run(std::vector<DetectorOutput>& out) {
    if (run_.empty()) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < run_.size(); ++i) {
        if (run_sign_ * run_[i].z > run_sign_ * run_[best].z) best = i;
    }
    run_[best].event = run_sign_ > 0 ? above_kind_ : *below_kind_;
    out.insert(out.end(), run_.begin(), run_.end());
    run_.clear();
    run_sign_ = 0;
}

std::vector<DetectorOutput> ExceedanceEvents::push(long n, double z) {
    std::vector<DetectorOutput> out;
    const int sign = classify(z);
    if (run_sign_ != 0 && sign != run_sign_) close_run(out);
    if (sign != 0) {
        run_sign_ = sign;
        run_.push_back({n, z, std::nullopt});
    } else {
        out.push_back({n, z, std::nullopt});
    }
    return out;
}

std::vector<DetectorOutput> ExceedanceEvents::finish() {
    std::vector<DetectorOutput> out;
    close_run(out);
    return out;
}

EdgeDetector::EdgeDetector(std::shared_ptr<const FilterRealization> realization, double threshold, double sigma0_sq)
    : estimator_(std::move(realization), sigma0_sq),
      events_(threshold, EventKind::RisingEdge, EventKind::FallingEdge) {
    require_outputs(estimator_.realization(), 2, "edge");
}

std::vector<DetectorOutput> EdgeDetector::push(double x) {
    const auto frame = estimator_.push(x);
    return events_.push(frame.n, edge_statistic(frame));
}

PeakDetector::PeakDetector(std::shared_ptr<const FilterRealization> realization, double threshold, double sigma0_sq)
    : estimator_(std::move(realization), sigma0_sq), events_(threshold, EventKind::Peak, std::nullopt) {
    require_outputs(estimator_.realization(), 3, "peak");
}

std::vector<DetectorOutput> PeakDetector::push(double x) {
    const auto frame = estimator_.push(x);
    return events_.push(frame.n, peak_statistic(frame));
}

void check_change_pair(const FilterRealization& a, const FilterRealization& b) {
    const auto& sa = a.spec;
    const auto& sb = b.spec;
    if (sa.weight.p() != sb.weight.p()) throw std::invalid_argument("change filters must share p");
    if (sa.model_order != sb.model_order) throw std::invalid_argument("change filters must share K_X");
    if (sa.sample_period != sb.sample_period) throw std::invalid_argument("change filters must share T_s");
    if (sa.weight.kappa() == sb.weight.kappa()) throw std::invalid_argument("change filters must differ in kappa");
    if (std::abs(a.delay() - b.delay()) > 1e-12 * std::max(1.0, std::abs(a.delay()))) {
        throw std::invalid_argument("change filters must be evaluated at a common delay");
    }
}

namespace {

std::shared_ptr<const FilterRealization> realize_at(DesignSpec spec, double delay) {
    spec.delay = delay;
    return std::make_shared<const FilterRealization>(build_realization(spec));
}

ChangeDetector::RealizationPair realize_pair(const ChangeDetectorConfig& config) {
    const double q = config.common_delay ? *config.common_delay : build_realization(config.filter_a).delay();
    return {realize_at(config.filter_a, q), realize_at(config.filter_b, q)};
}

}  // namespace

ChangeDetector::ChangeDetector(const ChangeDetectorConfig& config, double sigma0_sq)
    : ChangeDetector(realize_pair(config), config.threshold, sigma0_sq) {}

ChangeDetector::ChangeDetector(RealizationPair pair, double threshold, double sigma0_sq)
    : ChangeDetector(std::move(pair.first), std::move(pair.second), threshold, sigma0_sq) {}

ChangeDetector::ChangeDetector(std::shared_ptr<const FilterRealization> a, std::shared_ptr<const FilterRealization> b,
                               double threshold, double sigma0_sq)
    : a_(std::move(a)),
      b_(std::move(b)),
      sigma0_sq_(sigma0_sq),
      events_(threshold, EventKind::BreakUp, EventKind::BreakDown) {
    if (!a_ || !b_) throw std::invalid_argument("change detector needs two realizations");
    if (!(sigma0_sq >= 0.0)) throw std::invalid_argument("initial noise variance must be >= 0");
    check_change_pair(*a_, *b_);
    init_shared();
}

void ChangeDetector::init_shared() {
    const double p = a_->spec.weight.p();
    const int k1 = std::max(a_->first_network.order(), b_->first_network.order());
    const int k2 = std::max(a_->second_network.order(), b_->second_network.order());
    first_rho_ = steady_state_vector(k1, p);
    second_rho_ = steady_state_vector(k2, p);
}

std::vector<DetectorOutput> ChangeDetector::push(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite input sample");
    if (!state_) {
        state_ = EstimatorState{first_rho_ * x, second_rho_ * (sigma0_sq_ + x * x), 0};
    } else {
        const double p = a_->spec.weight.p();
        advance({state_->first.data(), static_cast<std::size_t>(state_->first.size())}, p, x);
        advance({state_->second.data(), static_cast<std::size_t>(state_->second.size())}, p, x * x);
        ++state_->n;
    }
    const std::span<const double> w1(state_->first.data(), static_cast<std::size_t>(state_->first.size()));
    const std::span<const double> w2(state_->second.data(), static_cast<std::size_t>(state_->second.size()));
    auto fa = frame_from_states(*a_, w1, w2, state_->n);
    auto fb = frame_from_states(*b_, w1, w2, state_->n);
    const double z = change_statistic(fa, fb);
    last_ = std::make_pair(std::move(fa), std::move(fb));
    return events_.push(state_->n, z);
}

}  // namespace lrf
