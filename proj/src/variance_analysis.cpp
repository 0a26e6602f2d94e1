#include "lrf/variance_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace lrf {

namespace {

// Covariance of the monomial coefficients per unit noise variance:
// S_phi^-1 S_WphiWphi S_phi^-1.
Eigen::MatrixXd coefficient_vrf(const DesignSpec& spec) {
    const Eigen::MatrixXd overlap = overlap_matrix(spec);
    const auto ortho = orthonormal_transforms(overlap);
    const Eigen::MatrixXd inverse = ortho.phi_from_psi * ortho.psi_from_phi;
    return inverse * squared_weight_overlap(spec) * inverse;
}

// Coefficients (ascending powers of q) of the polynomial VRF[k_t, k_t](q).
std::vector<double> vrf_polynomial(const DesignSpec& spec, int derivative) {
    const int kx = spec.model_order;
    const Eigen::MatrixXd m = coefficient_vrf(spec);
    const double scale = std::pow(1.0 / spec.sample_period, 2 * derivative);
    std::vector<double> falling(static_cast<std::size_t>(kx), 0.0);
    for (int c = derivative; c < kx; ++c) {
        double f = 1.0;
        for (int i = 0; i < derivative; ++i) f *= c - i;
        falling[static_cast<std::size_t>(c)] = f;
    }
    const int degree = 2 * (kx - 1 - derivative);
    std::vector<double> coeffs(static_cast<std::size_t>(std::max(degree, 0) + 1), 0.0);
    for (int a = derivative; a < kx; ++a) {
        for (int b = derivative; b < kx; ++b) {
            coeffs[static_cast<std::size_t>(a + b - 2 * derivative)] +=
                scale * m(a, b) * falling[static_cast<std::size_t>(a)] * falling[static_cast<std::size_t>(b)];
        }
    }
    return coeffs;
}

double eval_poly(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<double> derivative_of(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    return d;
}

std::vector<double> real_roots(const std::vector<double>& c) {
    std::vector<double> coeffs = c;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree < 1) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto deriv = derivative_of(coeffs);
    std::vector<double> roots;
    for (const auto& z : solver.eigenvalues()) {
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z.real()))) continue;
        double x = z.real();
        for (int it = 0; it < 8; ++it) {  // Newton polish
            const double slope = eval_poly(deriv, x);
            if (slope == 0.0) break;
            const double dx = eval_poly(coeffs, x) / slope;
            x -= dx;
            if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

Eigen::MatrixXd squared_weight_overlap(const DesignSpec& spec) {
    const int kx = spec.model_order;
    const double p2 = spec.weight.p() * spec.weight.p();
    Eigen::MatrixXd s(kx, kx);
    for (int a = 0; a < kx; ++a) {
        for (int b = 0; b < kx; ++b) s(a, b) = erlang_sum(a + b + 2 * spec.weight.kappa(), p2);
    }
    return s;
}

Eigen::MatrixXd vrf_matrix(const DesignSpec& spec, const TransformSet& transforms) {
    const Eigen::MatrixXd c_phi = transforms.synthesis * transforms.phi_from_psi * transforms.psi_from_phi;
    const Eigen::MatrixXd v = c_phi * squared_weight_overlap(spec) * c_phi.transpose();
    return 0.5 * (v + v.transpose());
}

double vrf_at_delay(const DesignSpec& spec, double delay, int derivative) {
    spec.validate();
    if (derivative < 0 || derivative >= spec.model_order) {
        throw std::domain_error("derivative index must lie in [0, K_X)");
    }
    return eval_poly(vrf_polynomial(spec, derivative), delay);
}

Eigen::MatrixXd impulse_response(const FilterRealization& realization, int length) {
    if (length < 1) throw std::invalid_argument("impulse response length must be >= 1");
    const auto& c = realization.transforms.derivative_output;
    Eigen::MatrixXd h(c.rows(), length);
    StateVector state{Eigen::VectorXd::Zero(realization.first_network.order()), 0};
    for (int m = 0; m < length; ++m) {
        step(realization.first_network, state, m == 0 ? 1.0 : 0.0);
        h.col(m) = c * state.w;
    }
    return h;
}

double vrf_by_parseval(const FilterRealization& realization, int row_a, int row_b) {
    const auto& c = realization.transforms.derivative_output;
    if (row_a < 0 || row_b < 0 || row_a >= c.rows() || row_b >= c.rows()) {
        throw std::out_of_range("derivative row out of range");
    }
    constexpr long kMaxHorizon = 1'000'000;
    StateVector state{Eigen::VectorXd::Zero(realization.first_network.order()), 0};
    double total = 0.0;
    double scale = 0.0;  // running sum of |h_a h_b|, guards cancelling sums
    long done = 0;
    long block = 256;
    while (done < kMaxHorizon) {
        double block_abs = 0.0;
        for (long m = 0; m < block; ++m) {
            step(realization.first_network, state, done + m == 0 ? 1.0 : 0.0);
            const double term = c.row(row_a).dot(state.w) * c.row(row_b).dot(state.w);
            total += term;
            block_abs += std::abs(term);
        }
        scale += block_abs;
        done += block;
        if (done > 1 && block_abs < 1e-12 * scale) return total;
        block = done;  // doubles the horizon
    }
    throw std::runtime_error("impulse response did not converge within 1e6 samples");
}

VrfReport optimal_delay(const DesignSpec& spec, int derivative) {
    spec.validate();
    if (derivative < 0 || derivative >= spec.model_order) {
        throw std::domain_error("derivative index must lie in [0, K_X)");
    }
    const auto poly = vrf_polynomial(spec, derivative);
    VrfReport report;
    constexpr double kStep = 1e-3;
    for (double root : real_roots(derivative_of(poly))) {
        const double here = eval_poly(poly, root);
        const double curvature = eval_poly(poly, root + kStep) + eval_poly(poly, root - kStep) - 2.0 * here;
        report.candidates.push_back({root, here, curvature > 0.0});
    }
    auto first_min = std::find_if(report.candidates.begin(), report.candidates.end(),
                                  [](const StationaryDelay& s) { return s.is_minimum; });
    if (first_min != report.candidates.end()) {
        report.q_optimal = first_min->delay;
    } else {
        report.q_optimal = weight_moments(spec.weight).mean;
    }
    DesignSpec resolved = spec;
    resolved.delay = report.q_optimal;
    report.vrf = vrf_matrix(resolved, build_transforms(resolved, report.q_optimal));
    return report;
}

}  // namespace lrf
