#include "sqz/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqz {

std::string_view route_name(Route route) {
    switch (route) {
        case Route::coherent_analytic: return "coherent-analytic";
        case Route::fock_analytic: return "fock-analytic";
        case Route::oracle: return "oracle";
        case Route::monte_carlo: return "monte-carlo";
        case Route::poisson_mixture: return "poisson-mixture";
    }
    return "unknown";
}

double HomodyneSettings::theta() const { return lo_phase + std::numbers::pi / 2.0; }

double HomodyneSettings::lo_phase_for_theta(double theta) {
    return theta - std::numbers::pi / 2.0;
}

HomodyneSettings HomodyneSettings::coherent(double beta, double lo_phase) {
    if (!(beta >= 0.0)) throw std::invalid_argument("HomodyneSettings: beta must be >= 0");
    return HomodyneSettings{lo_phase, beta};
}

HomodyneSettings HomodyneSettings::fock(std::int64_t n_total, double lo_phase) {
    if (n_total < 0) throw std::invalid_argument("HomodyneSettings: n_total must be >= 0");
    return HomodyneSettings{lo_phase, n_total};
}

double variance_bracket(const SqueezeParams& params, double theta) {
    // cosh^2 r + sinh^2 r - 2 sinh r cosh r cos(2 theta - phi), rearranged so
    // both terms are non-negative: near the squeezing minimum the printed
    // form loses ~3 digits to cancellation, this one none.
    const double c = std::cos(2.0 * theta - params.phi);
    return std::exp(-2.0 * params.r) + (1.0 - c) * std::sinh(2.0 * params.r);
}

VarianceReport nbc_variance_coherent(double beta, const SqueezeParams& params, double theta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("nbc_variance_coherent: beta must be >= 0");
    return VarianceReport{0.0, beta * beta * variance_bracket(params, theta),
                          Route::coherent_analytic};
}

VarianceReport nbc_variance_fock(std::int64_t n_total, const SqueezeParams& params, double theta) {
    if (n_total < 0) throw std::invalid_argument("nbc_variance_fock: n_total must be >= 0");
    return VarianceReport{0.0, static_cast<double>(n_total) * variance_bracket(params, theta),
                          Route::fock_analytic};
}

std::pair<double, double> appendix_series_ab(double r, int m_max) {
    if (m_max < 0) throw std::invalid_argument("appendix_series_ab: m_max must be >= 0");
    const double t = std::tanh(r);
    const double x = t * t;
    double term = 1.0;  // c_m x^m, starting at m = 0
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        sum_a += term * (1.0 + 4.0 * m);
        sum_b += term * (2.0 + 4.0 * m);
        term *= x * (2.0 * m + 1.0) / (2.0 * m + 2.0);
    }
    const double ch = std::cosh(r);
    return {sum_a / ch, sum_b * std::sinh(r) / (ch * ch)};
}

std::pair<double, double> closed_form_ab(double r) {
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    return {ch * ch + sh * sh, 2.0 * sh * ch};
}

VarianceReport poisson_mixture_variance(double alpha, const SqueezeParams& params, double theta,
                                        double n_sigma) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("poisson_mixture_variance: alpha must be > 0");
    }
    if (!(n_sigma > 0.0)) {
        throw std::invalid_argument("poisson_mixture_variance: n_sigma must be > 0");
    }
    const double mean_n = alpha * alpha;
    const auto lo = static_cast<std::int64_t>(std::max(0.0, std::floor(mean_n - n_sigma * alpha)));
    const auto hi = static_cast<std::int64_t>(std::ceil(mean_n + n_sigma * alpha));

    const double log_mean = std::log(mean_n);
    double mass = 0.0;
    double expected_n = 0.0;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double nn = static_cast<double>(n);
        const double w = std::exp(-mean_n + nn * log_mean - std::lgamma(nn + 1.0));
        mass += w;
        expected_n += w * nn;
    }
    if (mass < 1.0 - 1e-9) {
        throw std::invalid_argument(
            "poisson_mixture_variance: window holds less than 1 - 1e-9 of the Poisson mass; "
            "increase alpha or n_sigma");
    }
    // Conditional means <n_bc | N> all vanish, so the law-of-total-variance
    // cross term Var_N(E[n_bc|N]) is zero and only E_N[Var(n_bc|N)] remains.
    const double variance = variance_bracket(params, theta) * expected_n;
    return VarianceReport{0.0, variance, Route::poisson_mixture};
}

double poisson_relative_spread(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("poisson_relative_spread: alpha must be > 0");
    }
    return 1.0 / alpha;
}

}  // namespace sqz
