#include "sqz/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqz {

namespace {

double reduce_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    double out = std::fmod(phi, two_pi);
    if (out < 0.0) out += two_pi;
    return out;
}

}  // namespace

SqueezeParams::SqueezeParams(double r_, double phi_) : r(r_), phi(reduce_phase(phi_)) {
    if (!std::isfinite(r_) || !std::isfinite(phi_)) {
        throw std::invalid_argument("SqueezeParams: r and phi must be finite");
    }
    if (r_ < 0.0) {
        throw std::invalid_argument("SqueezeParams: squeeze magnitude r must be >= 0");
    }
}

double FockVector::squared_norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum;
}

bool FockVector::is_normalized(double tol) const {
    return std::abs(squared_norm() - 1.0) <= tol;
}

FockVector squeezed_vacuum_coefficients(const SqueezeParams& params, int m_max) {
    if (m_max < 0) {
        throw std::invalid_argument("squeezed_vacuum_coefficients: m_max must be >= 0");
    }
    FockVector state;
    state.amplitudes.assign(2 * static_cast<std::size_t>(m_max) + 1, {0.0, 0.0});

    const std::complex<double> step_phase = -std::polar(1.0, params.phi) * std::tanh(params.r);
    std::complex<double> c = std::sqrt(1.0 / std::cosh(params.r));
    state.amplitudes[0] = c;
    for (int m = 0; m < m_max; ++m) {
        c *= step_phase * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
        state.amplitudes[2 * static_cast<std::size_t>(m) + 2] = c;
    }
    return state;
}

int truncation_for_tolerance(double r, double tail_mass) {
    if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
        throw std::invalid_argument("truncation_for_tolerance: tail_mass must lie in (0, 1)");
    }
    if (r < 0.0 || !std::isfinite(r)) {
        throw std::invalid_argument("truncation_for_tolerance: r must be finite and >= 0");
    }
    if (r == 0.0) return 0;

    const double t = std::tanh(r);
    const double q = t * t;  // asymptotic probability ratio |C_{m+1}/C_m|^2 -> q

    // Probabilities p_m = |C_m|^2 via the exact ratio p_{m+1}/p_m = q (2m+1)/(2m+2),
    // extended until the geometric remainder bound p_M * q/(1-q) is far below
    // the requested tail mass.
    std::vector<double> probs;
    probs.push_back(1.0 / std::cosh(r));
    const double remainder_factor = q / (1.0 - q);
    double p = probs.back();
    while (p * remainder_factor >= 1e-3 * tail_mass) {
        const double m = static_cast<double>(probs.size()) - 1.0;
        p *= q * (2.0 * m + 1.0) / (2.0 * m + 2.0);
        probs.push_back(p);
    }

    // Exact tails by backward accumulation (smallest terms first), with the
    // conservative remainder bound folded in. tail(v) = sum_{m > v} p_m;
    // stepping candidate down by one adds p_candidate to the tail.
    double tail = probs.back() * remainder_factor;
    int candidate = static_cast<int>(probs.size()) - 1;
    while (candidate > 0) {
        const double tail_below = tail + probs[static_cast<std::size_t>(candidate)];
        if (tail_below >= tail_mass) break;
        tail = tail_below;
        --candidate;
    }
    // Smallest m_max whose tail is below tail_mass.
    return candidate;
}

QuadratureStats quadrature_statistics(const FockVector& state, double theta) {
    if (!state.is_normalized()) {
        throw std::invalid_argument("quadrature_statistics: state is not normalized within tolerance");
    }
    const auto& amp = state.amplitudes;
    const std::size_t n = amp.size();

    std::complex<double> exp_a{0.0, 0.0};    // <a>
    std::complex<double> exp_a2{0.0, 0.0};   // <a^2>
    double exp_num = 0.0;                    // <a† a>
    for (std::size_t m = 0; m < n; ++m) {
        const double mm = static_cast<double>(m);
        exp_num += mm * std::norm(amp[m]);
        if (m + 1 < n) exp_a += std::conj(amp[m]) * std::sqrt(mm + 1.0) * amp[m + 1];
        if (m + 2 < n) exp_a2 += std::conj(amp[m]) * std::sqrt((mm + 1.0) * (mm + 2.0)) * amp[m + 2];
    }

    const std::complex<double> rot = std::polar(1.0, -theta);
    const double mean = (exp_a * rot).real();
    const double mean_sq = (2.0 * (exp_a2 * rot * rot).real() + 2.0 * exp_num + 1.0) / 4.0;
    return QuadratureStats{theta, mean, mean_sq - mean * mean};
}

}  // namespace sqz
