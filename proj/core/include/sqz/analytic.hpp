#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>

#include "sqz/fock.hpp"

// Closed-form predictions for the photon-count-difference variance in the
// coherent and Fock descriptions of the local oscillator, the series pair
// (A, B) behind them, and the Poisson mixture over total photon number.

namespace sqz {

/// Which computational route produced a variance figure.
enum class Route {
    coherent_analytic,
    fock_analytic,
    oracle,
    monte_carlo,
    poisson_mixture,
};

std::string_view route_name(Route route);

/// Mean and variance of the n_bc = n_b - n_c observable, tagged by route.
struct VarianceReport {
    double mean = 0.0;
    double variance = 0.0;
    Route route = Route::oracle;
};

/// Homodyne configuration: local-oscillator phase plus either a coherent
/// amplitude beta or a total photon number N. The measured quadrature angle
/// is tied to the LO phase by theta = lo_phase + pi/2 exactly.
struct HomodyneSettings {
    double lo_phase = 0.0;
    std::variant<double, std::int64_t> amplitude;  ///< beta or n_total

    double theta() const;
    static HomodyneSettings coherent(double beta, double lo_phase);
    static HomodyneSettings fock(std::int64_t n_total, double lo_phase);
    static double lo_phase_for_theta(double theta);

    bool is_coherent() const { return std::holds_alternative<double>(amplitude); }
    double beta() const { return std::get<double>(amplitude); }
    std::int64_t n_total() const { return std::get<std::int64_t>(amplitude); }
};

/// The bracket cosh^2 r + sinh^2 r - 2 sinh r cosh r cos(2 theta - phi),
/// evaluated in the cancellation-free form e^{-2r} + (1 - cos(2 theta - phi)) sinh(2r).
/// Both routes below and the Poisson mixture share this evaluation.
double variance_bracket(const SqueezeParams& params, double theta);

/// Strong-LO variance with a coherent local oscillator of amplitude beta:
/// variance = beta^2 * bracket, mean = 0 (squeezed vacuum has <X> = 0).
VarianceReport nbc_variance_coherent(double beta, const SqueezeParams& params, double theta);

/// Same functional form with beta^2 replaced by the total photon number N.
VarianceReport nbc_variance_fock(std::int64_t n_total, const SqueezeParams& params, double theta);

/// Partial sums (m = 0..m_max) of the series
///   A = sech r * sum c_m x^m (1 + 4m),
///   B = (sinh r / cosh^2 r) * sum c_m x^m (2 + 4m),
/// with c_m = (2m)! / (2^{2m} (m!)^2) and x = tanh^2 r, accumulated through
/// the term-ratio recurrence c_{m+1} x^{m+1} = c_m x^m * x (2m+1)/(2m+2).
std::pair<double, double> appendix_series_ab(double r, int m_max);

/// The closed forms the series converge to:
/// A = cosh^2 r + sinh^2 r, B = 2 sinh r cosh r.
std::pair<double, double> closed_form_ab(double r);

/// Variance averaged over a Poisson photon-number distribution with mean
/// alpha^2, truncated to the window alpha^2 ± n_sigma*alpha. The conditional
/// means all vanish, so the law-of-total-variance cross term is zero and the
/// result reduces to bracket * E[N] over the window.
///
/// Throws if alpha <= 0 or if the window holds less than 1 - 1e-9 of the
/// Poisson mass.
VarianceReport poisson_mixture_variance(double alpha, const SqueezeParams& params,
                                        double theta, double n_sigma = 8.0);

/// Relative spread dN / N̄ = 1/alpha of the Poisson photon-number mixture.
double poisson_relative_spread(double alpha);

}  // namespace sqz
