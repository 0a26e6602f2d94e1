#include "lrf/scenario_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrf {

namespace {

double gaussian_bump(int n, int center, double sigma) {
    const double d = (n - center) / sigma;
    return std::exp(-0.5 * d * d);
}

void add_noise(std::vector<double>& x, std::uint64_t seed, double noise_std) {
    if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
    if (noise_std == 0.0) return;
    GaussianSource noise(seed);
    for (double& v : x) v += noise.next(noise_std);
}

}  // namespace

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    constexpr double scale = 0x1.0p-53;
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * scale;
    const double u2 = static_cast<double>(engine_() >> 11) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void TargetScenario::validate() const {
    if (samples < 1) throw std::invalid_argument("scenario needs at least one sample");
    if (!(sample_period > 0.0)) throw std::invalid_argument("sample period must be > 0");
    if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
    if (const auto* g = std::get_if<GaussianAccel>(&accel); g && !(g->stddev >= 0.0)) {
        throw std::invalid_argument("acceleration stddev must be >= 0");
    }
}

TargetScenario constant_accel_scenario(std::uint64_t seed) {
    TargetScenario s;
    s.seed = seed;
    return s;
}

TargetScenario random_accel_scenario(std::uint64_t seed) {
    TargetScenario s;
    s.accel = GaussianAccel{100.0};
    s.seed = seed;
    return s;
}

TargetTrack simulate_target(const TargetScenario& s) {
    s.validate();
    const double ts = s.sample_period;
    GaussianSource rng(s.seed);
    auto draw_accel = [&]() {
        if (const auto* c = std::get_if<ConstantAccel>(&s.accel)) return c->value;
        return rng.next(std::get<GaussianAccel>(s.accel).stddev);
    };

    TargetTrack track{Eigen::MatrixXd(s.samples, 3), Eigen::VectorXd(s.samples)};
    double pos = s.initial_position;
    double vel = s.initial_velocity;
    for (int n = 0; n < s.samples; ++n) {
        const double a = draw_accel();
        if (n > 0) {
            pos += ts * vel + 0.5 * ts * ts * a;
            vel += ts * a;
        }
        track.truth(n, 0) = pos;
        track.truth(n, 1) = vel;
        track.truth(n, 2) = a;
        track.measurements(n) = pos + rng.next(s.noise_std);
    }
    return track;
}

std::vector<double> smoothed_pulse() {
    const int half = static_cast<int>(6 * kPulseSmoothing);
    std::vector<double> kernel(2 * half + 1);
    for (int j = -half; j <= half; ++j) kernel[j + half] = gaussian_bump(j, 0, kPulseSmoothing);
    double total = 0.0;
    for (double k : kernel) total += k;
    for (double& k : kernel) k /= total;

    std::vector<double> pulse(kWaveformSamples, 0.0);
    for (int n = 0; n < kWaveformSamples; ++n) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int m = n - j;
            if (m >= kPulseStart && m < kPulseStart + kPulseLength) acc += kernel[j + half];
        }
        pulse[n] = acc;
    }
    const double peak = *std::max_element(pulse.begin(), pulse.end());
    for (double& v : pulse) v *= kPulseAmplitude / peak;
    return pulse;
}

std::vector<double> peak_interference() {
    const double last = kWaveformSamples - 1;
    std::vector<double> cubic(kWaveformSamples);
    for (int n = 0; n < kWaveformSamples; ++n) cubic[n] = n * (n - 0.5 * last) * (n - last);
    const auto [lo, hi] = std::minmax_element(cubic.begin(), cubic.end());
    const double lo_v = *lo;
    const double span = *hi - *lo;
    for (double& v : cubic) v = 10.0 + 10.0 * (v - lo_v) / span;
    return cubic;
}

std::vector<double> synth_edge_waveform(std::uint64_t seed, double noise_std) {
    auto x = smoothed_pulse();
    for (double& v : x) v += kBackground;
    add_noise(x, seed, noise_std);
    return x;
}

std::vector<double> synth_peak_waveform(std::uint64_t seed, double noise_std) {
    auto x = peak_interference();
    for (int n = 0; n < kWaveformSamples; ++n) {
        x[n] += 10.0 * gaussian_bump(n, kClutterCenter, 2.0) + 10.0 * gaussian_bump(n, kTargetCenter, 12.0);
    }
    add_noise(x, seed, noise_std);
    return x;
}

std::vector<double> synth_change_waveform(std::uint64_t seed, double noise_std) {
    auto x = smoothed_pulse();
    for (int n = 0; n < kWaveformSamples; ++n) x[n] += kBackground + n / 10.0;
    add_noise(x, seed, noise_std);
    return x;
}

}  // namespace lrf
