#pragma once

#include <complex>
#include <vector>

// Single-mode Fock-space tools: squeezed-vacuum coefficients, truncation
// control, and quadrature statistics.
//
// Everything here is a pure function of its inputs; values are plain data
// and safe to share across threads.

namespace sqz {

/// Acceptance tolerance for "this state is normalized" checks, well above
/// double-precision accumulation at a few hundred amplitudes and well below
/// any physical effect studied.
inline constexpr double k_norm_tolerance = 1e-9;

/// Squeeze-operator parameters xi = r * exp(i*phi).
struct SqueezeParams {
    double r = 0.0;    ///< squeeze magnitude, >= 0
    double phi = 0.0;  ///< squeeze phase, reduced to [0, 2*pi)

    SqueezeParams() = default;
    /// Throws std::invalid_argument if r < 0 or either value is non-finite.
    SqueezeParams(double r_, double phi_);
};

/// Complex amplitudes over photon number 0..cutoff of one bosonic mode.
struct FockVector {
    std::vector<std::complex<double>> amplitudes;  ///< index = photon number

    std::size_t size() const { return amplitudes.size(); }
    long cutoff() const { return static_cast<long>(amplitudes.size()) - 1; }
    double squared_norm() const;
    bool is_normalized(double tol = k_norm_tolerance) const;
};

/// Mean and variance of the quadrature X(theta) = (a e^{-i theta} + a† e^{i theta})/2.
struct QuadratureStats {
    double theta;
    double mean;
    double variance;
};

/// Squeezed-vacuum amplitudes C_m at even photon numbers 2m, m = 0..m_max.
///
/// The returned vector has length 2*m_max + 1 with all odd entries exactly
/// zero. Coefficients come from the ratio recurrence
///   C_{m+1} = C_m * (-e^{i phi} tanh r) * sqrt((2m+1)(2m+2)) / (2(m+1)),
/// seeded with C_0 = sqrt(sech r). The recurrence avoids the (2m)! overflow
/// of the direct formula (which dies near m = 85 in double precision) and
/// all its ratios stay below 1 in magnitude for finite r.
///
/// r = 0 is ordinary input and yields the vacuum.
FockVector squeezed_vacuum_coefficients(const SqueezeParams& params, int m_max);

/// Smallest m_max whose discarded tail sum_{m > m_max} |C_m|^2 is below
/// tail_mass. The tail is summed exactly (smallest terms first); the
/// asymptotic geometric ratio |C_{m+1}/C_m|^2 -> tanh^2 r bounds where the
/// summation may stop. Throws unless 0 < tail_mass < 1.
int truncation_for_tolerance(double r, double tail_mass);

/// Exact mean and variance of X(theta) on a truncated state, via ladder
/// action on the amplitudes. Throws if the squared norm is more than
/// k_norm_tolerance away from 1.
QuadratureStats quadrature_statistics(const FockVector& state, double theta);

}  // namespace sqz
