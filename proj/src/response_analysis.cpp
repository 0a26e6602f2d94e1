#include "lrf/response_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrf {

namespace {

// Solves (I - G z^-1) v = H by forward substitution. Row k reads
// v_k (1 - p z^-1) = 1 + p z^-1 sum_{j<k} v_j.
Eigen::VectorXcd resolvent_times_input(const NetworkMatrices& net, double omega) {
    const Complex pz = net.p() * std::polar(1.0, -omega);
    const Complex denom = 1.0 - pz;
    Eigen::VectorXcd v(net.order());
    Complex prefix = 0.0;
    for (int k = 0; k < net.order(); ++k) {
        v(k) = (1.0 + pz * prefix) / denom;
        prefix += v(k);
    }
    return v;
}

}  // namespace

Complex frequency_response(const FilterRealization& realization, double omega, int derivative) {
    const auto& c = realization.transforms.derivative_output;
    if (derivative < 0 || derivative >= c.rows()) throw std::out_of_range("derivative row out of range");
    const Eigen::VectorXcd v = resolvent_times_input(realization.first_network, omega);
    return c.row(derivative).cast<Complex>().dot(v);
}

std::vector<Complex> frequency_response(const FilterRealization& realization, double omega) {
    const auto& c = realization.transforms.derivative_output;
    const Eigen::VectorXcd v = resolvent_times_input(realization.first_network, omega);
    const Eigen::VectorXcd h = c.cast<Complex>() * v;
    return {h.data(), h.data() + h.size()};
}

double distortion(const FilterRealization& realization, double omega) {
    const Complex err = frequency_response(realization, omega, 0) - std::polar(1.0, -realization.delay() * omega);
    return std::norm(err);
}

std::optional<double> bandwidth(const FilterRealization& realization) {
    constexpr int kBracketPoints = 2048;
    constexpr double kNyquist = 0.5;
    auto excess = [&](double f) { return distortion(realization, 2.0 * std::numbers::pi * f) - 0.5; };
    double lo = 0.0;
    for (int i = 1; i <= kBracketPoints; ++i) {
        const double hi = kNyquist * i / kBracketPoints;
        if (excess(hi) >= 0.0) {
            double a = lo;
            double b = hi;
            while (b - a > 1e-9) {
                const double mid = 0.5 * (a + b);
                (excess(mid) >= 0.0 ? b : a) = mid;
            }
            return 0.5 * (a + b);
        }
        lo = hi;
    }
    return std::nullopt;
}

double group_delay_dc(const FilterRealization& realization) {
    constexpr double h = 1e-5;
    const double up = std::arg(frequency_response(realization, h, 0));
    const double down = std::arg(frequency_response(realization, -h, 0));
    return -(up - down) / (2.0 * h);
}

ResponseReport response_report(const FilterRealization& realization, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("frequency grid needs at least 2 points");
    ResponseReport report;
    report.freqs.reserve(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        const double f = 0.5 * i / (grid_size - 1);
        const double omega = 2.0 * std::numbers::pi * f;
        report.freqs.push_back(f);
        auto h = frequency_response(realization, omega);
        report.distortion.push_back(std::norm(h.front() - std::polar(1.0, -realization.delay() * omega)));
        report.H.push_back(std::move(h));
    }
    report.f_c = bandwidth(realization);
    report.group_delay_dc = group_delay_dc(realization);
    return report;
}

}  // namespace lrf
