// Frequency-domain instruments for a realized filter: transfer evaluation,
// smoother distortion |H_0 - e^{-iqw}|^2, distortion-free bandwidth and DC
// group delay.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "lrf/regression_design.hpp"

namespace lrf {

using Complex = std::complex<double>;

/// Row k_t of C_q (I - G e^{-i omega})^-1 H, omega in radians/sample.
Complex frequency_response(const FilterRealization& realization, double omega, int derivative);

/// All K_t rows at once.
std::vector<Complex> frequency_response(const FilterRealization& realization, double omega);

/// |H_0(omega) - e^{-i q omega}|^2.
double distortion(const FilterRealization& realization, double omega);

/// Least f > 0 (cycles/sample) where the distortion reaches 1/2; empty when
/// it stays below 1/2 up to Nyquist.
std::optional<double> bandwidth(const FilterRealization& realization);

/// -d arg H_0 / d omega at omega = 0, by central difference.
double group_delay_dc(const FilterRealization& realization);

struct ResponseReport {
    std::vector<double> freqs;                // cycles/sample
    std::vector<std::vector<Complex>> H;      // [grid point][k_t]
    std::vector<double> distortion;           // k_t = 0
    std::optional<double> f_c;
    double group_delay_dc;
};

inline constexpr int kDefaultGridSize = 2048;

/// Uniform grid of grid_size points on [0, 1/2]. Throws std::invalid_argument
/// for grid_size < 2.
ResponseReport response_report(const FilterRealization& realization, int grid_size = kDefaultGridSize);

}  // namespace lrf
