#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sqz/block.hpp"
#include "sqz/fock.hpp"

// Relative-phase distribution P(Phi) between signal and local-oscillator
// modes, by two routes that must agree: the closed squeezed-vacuum form
// (one Fourier sum in the pair index) and the general projector form
// (per-block Fourier sums over occupation).

namespace sqz {

/// Variance of the uniform distribution on [0, pi]: the vacuum baseline for
/// the restricted-window statistics.
inline constexpr double k_uniform_half_window_variance = 0.8224670334241132;  // pi^2 / 12

/// P(Phi) sampled on a uniform grid over [0, 2*pi).
struct PhaseDistribution {
    std::vector<double> grid;     ///< G points, grid[g] = g * 2*pi / G
    std::vector<double> density;  ///< probability per radian, >= 0

    double grid_step() const;
    /// Trapezoid integral over the full circle (periodic, so equal weights).
    double integral() const;
    std::size_t argmax() const;
};

/// Statistics of the density restricted (and renormalized) to [lo, hi].
/// Mean and variance are linear, not circular: the window is chosen to
/// isolate a single peak, and the uniform baseline pi^2/12 is the linear one.
struct WindowStats {
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double window_mass = 0.0;  ///< unrenormalized mass inside the window
};

/// Closed form P(Phi) = |sum_m C_m e^{-2im(Phi + lo_phase)}|^2 / (2*pi),
/// evaluated by direct Horner summation at each grid point. Requires
/// grid_points >= 4*m_max so the highest density harmonic (2*m_max) is
/// oversampled and the periodic trapezoid integral is alias-free.
PhaseDistribution phase_distribution_closed(const SqueezeParams& params, double lo_phase,
                                            int m_max, int grid_points);

/// General projector route: per block, the squared magnitude of the Fourier
/// sum of the amplitudes, summed over blocks. Requires the state normalized
/// and grid_points >= 2*(largest block N).
PhaseDistribution phase_distribution_general(const TwoModeState& state, int grid_points);
PhaseDistribution phase_distribution_general(const TwoModeBlock& block, int grid_points);

/// Renormalized linear mean/variance over [lo, hi] by trapezoid quadrature on
/// the grid points inside the window (no sub-grid interpolation). Throws on
/// reversed/out-of-range windows and on window mass below 1e-12.
WindowStats restricted_window_stats(const PhaseDistribution& dist, double lo, double hi);

/// For each r: ln of ([0, pi]-window variance of the closed distribution)
/// over the uniform baseline pi^2/12. Throws if any r <= 0.
std::vector<std::pair<double, double>> log_variance_ratio_curve(std::span<const double> r_values,
                                                                double phi, double lo_phase,
                                                                int m_max, int grid_points);

/// Ordinary least-squares slope of y against x. Used for the e^{-r} width
/// law; exposed for reuse by the CLI and tests.
double least_squares_slope(std::span<const std::pair<double, double>> points);

}  // namespace sqz
