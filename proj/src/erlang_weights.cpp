#include "lrf/erlang_weights.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lrf {

namespace {

void check_smoothing(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("smoothing parameter p must lie in (0, 1), got " + std::to_string(p));
    }
}

// Numerator coefficients of S_k(p) = N_k(p) / (1-p)^(k+1), lowest power first.
// N_0 = 1; for k >= 1 the constant term is zero.
constexpr std::array<std::array<double, 11>, 11> kNumerators{{
    {1},
    {0, 1},
    {0, 1, 1},
    {0, 1, 4, 1},
    {0, 1, 11, 11, 1},
    {0, 1, 26, 66, 26, 1},
    {0, 1, 57, 302, 302, 57, 1},
    {0, 1, 120, 1191, 2416, 1191, 120, 1},
    {0, 1, 247, 4293, 15619, 15619, 4293, 247, 1},
    {0, 1, 502, 14608, 88234, 156190, 88234, 14608, 502, 1},
    {0, 1, 1013, 47840, 455192, 1310354, 1310354, 455192, 47840, 1013, 1},
}};

double closed_form_sum(int k, double p) {
    const auto& c = kNumerators[static_cast<std::size_t>(k)];
    double num = 0.0;
    for (int i = k; i >= 0; --i) num = num * p + c[static_cast<std::size_t>(i)];
    return num / std::pow(1.0 - p, k + 1);
}

}  // namespace

WeightSpec WeightSpec::make(int kappa, double p) {
    check_smoothing(p);
    if (kappa < 0) throw std::domain_error("shape parameter kappa must be >= 0");
    return WeightSpec(kappa, p, -1.0 / std::log(p));
}

double erlang_sum_numeric(int k, double p) {
    check_smoothing(p);
    if (k < 0) throw std::domain_error("erlang_sum order must be >= 0");
    constexpr long kMaxTerms = 10'000'000;
    double total = (k == 0) ? 1.0 : 0.0;
    double pm = 1.0;
    // Past the mode of m^k p^m the terms decrease monotonically, so the first
    // negligible term there terminates the sum.
    const double mode = (k == 0) ? 0.0 : -k / std::log(p);
    for (long m = 1; m < kMaxTerms; ++m) {
        pm *= p;
        const double term = pm * std::pow(static_cast<double>(m), k);
        total += term;
        if (m > mode && term < 1e-16 * total) break;
    }
    return total;
}

double erlang_sum(int k, double p) {
    check_smoothing(p);
    if (k < 0 || k > kErlangSumMaxOrder) {
        throw std::domain_error("erlang_sum order must lie in [0, " + std::to_string(kErlangSumMaxOrder) +
                                "], got " + std::to_string(k));
    }
    if (k <= kClosedFormMaxOrder) return closed_form_sum(k, p);
    return erlang_sum_numeric(k, p);
}

double normalizer(int k, double p) { return 1.0 / erlang_sum(k, p); }

WeightMoments weight_moments(const WeightSpec& spec) {
    const double order = spec.kappa() + 1.0;
    const double lam = spec.lambda();
    return {order * lam, order * lam * lam, 2.0 / std::sqrt(order)};
}

DispersionReport dispersion(const WeightSpec& spec, double sample_period) {
    if (!(sample_period > 0.0)) throw std::domain_error("sample period must be > 0");
    DispersionReport out{};
    out.sigma_t = sample_period * std::sqrt(weight_moments(spec).variance);
    if (spec.kappa() < 3) return out;

    // |Psi(i*Omega)| = Gamma(kappa+1) / (Omega^2 + a^2)^((kappa+1)/2) with a the
    // pulse decay rate. The magnitude is even in Omega, so the first moment of
    // the two-sided pulse vanishes and the half-line integrals give the ratio.
    const double a = 1.0 / (spec.lambda() * sample_period);
    const double half_order = 0.5 * (spec.kappa() + 1.0);
    auto magnitude = [&](double w) {
        const double r = w / a;
        return std::pow(1.0 + r * r, -half_order);
    };
    auto m0_integrand = [&](double w) { return magnitude(w); };
    auto m2_integrand = [&](double w) { return w * w * magnitude(w); };

    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    // Start where the magnitude has fallen to 1e-12 of its peak.
    double upper = a * std::sqrt(std::pow(1e12, 1.0 / half_order) - 1.0);
    double m0 = Quad::integrate(m0_integrand, 0.0, upper, 15, 1e-12);
    double m2 = Quad::integrate(m2_integrand, 0.0, upper, 15, 1e-12);
    for (int i = 0; i < 200; ++i) {
        const double next = 2.0 * upper;
        const double d0 = Quad::integrate(m0_integrand, upper, next, 15, 1e-12);
        const double d2 = Quad::integrate(m2_integrand, upper, next, 15, 1e-12);
        m0 += d0;
        m2 += d2;
        upper = next;
        if (d0 < 1e-8 * m0 && d2 < 1e-8 * m2) break;
    }
    const double sigma_omega = std::sqrt(m2 / m0);
    out.sigma_omega = sigma_omega;
    out.product = out.sigma_t * sigma_omega;
    return out;
}

}  // namespace lrf
