// Seeded synthetic data: Newtonian target tracks and the edge, peak and
// change-detection waveforms.
#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace lrf {

/// Standard normal variates from std::mt19937_64 via Box-Muller. Each pair of
/// engine outputs (b1, b2) gives u1 = ((b1 >> 11) + 1) * 2^-53 in (0, 1] and
/// u2 = (b2 >> 11) * 2^-53 in [0, 1); the cosine branch is returned first and
/// the sine branch is cached for the next call.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next();
    double next(double stddev) { return stddev * next(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct ConstantAccel {
    double value = 0.0;
};
struct GaussianAccel {
    double stddev = 0.0;
};

struct TargetScenario {
    double sample_period = 0.01;
    int samples = 200;
    double initial_position = 1000.0;
    double initial_velocity = 20.0;
    std::variant<ConstantAccel, GaussianAccel> accel = ConstantAccel{-20.0};
    double noise_std = 0.5;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument unless samples >= 1, T_s > 0, noise_std >= 0.
    void validate() const;
};

TargetScenario constant_accel_scenario(std::uint64_t seed = 1);
TargetScenario random_accel_scenario(std::uint64_t seed = 1);

struct TargetTrack {
    Eigen::MatrixXd truth;  // N x 3: position, velocity, acceleration
    Eigen::VectorXd measurements;
};

/// Row 0 holds the initial position and velocity. Row n applies the
/// acceleration of row n, held over one period, to row n - 1. For random
/// acceleration, each sample draws the acceleration before the noise.
TargetTrack simulate_target(const TargetScenario& scenario);

inline constexpr int kWaveformSamples = 400;
inline constexpr int kPulseStart = 150;
inline constexpr int kPulseLength = 100;
inline constexpr double kPulseSmoothing = 8.0;
inline constexpr double kPulseAmplitude = 20.0;
inline constexpr double kBackground = 100.0;
inline constexpr int kClutterCenter = 200;
inline constexpr int kTargetCenter = 300;
inline constexpr double kDefaultWaveformNoise = 0.5;

/// Noise-free smoothed rectangular pulse, peak value kPulseAmplitude.
std::vector<double> smoothed_pulse();

/// Peak-scenario interference: n (n - (N-1)/2) (n - (N-1)) mapped affinely
/// onto [10, 20] over the integer samples 0..N-1.
std::vector<double> peak_interference();

/// Pulse on a constant background of 100, noise_std 0 gives the clean signal.
std::vector<double> synth_edge_waveform(std::uint64_t seed, double noise_std = kDefaultWaveformNoise);

/// Clutter (amp 10, sigma 2) at n = 200 and target (amp 10, sigma 12) at
/// n = 300 on the cubic interference.
std::vector<double> synth_peak_waveform(std::uint64_t seed, double noise_std = kDefaultWaveformNoise);

/// Pulse on the ramp 100 + n / 10.
std::vector<double> synth_change_waveform(std::uint64_t seed, double noise_std = kDefaultWaveformNoise);

}  // namespace lrf
