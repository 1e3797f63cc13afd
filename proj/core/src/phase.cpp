#include "sqz/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqz {

namespace {

constexpr double k_two_pi = 2.0 * std::numbers::pi;

std::vector<double> make_grid(int grid_points) {
    const double step = k_two_pi / static_cast<double>(grid_points);
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (std::size_t g = 0; g < grid.size(); ++g) grid[g] = static_cast<double>(g) * step;
    return grid;
}

// |sum_k a_k w^k|^2 by Horner's method; one unit-modulus rotation per call.
double squared_fourier_sum(std::span<const std::complex<double>> coeffs,
                           std::complex<double> w) {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
    return std::norm(acc);
}

}  // namespace

double PhaseDistribution::grid_step() const { return k_two_pi / static_cast<double>(grid.size()); }

double PhaseDistribution::integral() const {
    double sum = 0.0;
    for (double d : density) sum += d;
    return sum * grid_step();
}

std::size_t PhaseDistribution::argmax() const {
    return static_cast<std::size_t>(
        std::max_element(density.begin(), density.end()) - density.begin());
}

PhaseDistribution phase_distribution_closed(const SqueezeParams& params, double lo_phase,
                                            int m_max, int grid_points) {
    if (m_max < 0) throw std::invalid_argument("phase_distribution_closed: m_max must be >= 0");
    if (grid_points < std::max(4, 4 * m_max)) {
        throw std::invalid_argument(
            "phase_distribution_closed: grid too coarse for the harmonic content (need >= 4*m_max)");
    }

    const FockVector fock = squeezed_vacuum_coefficients(params, m_max);
    std::vector<std::complex<double>> pair_coeffs(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        pair_coeffs[static_cast<std::size_t>(m)] = fock.amplitudes[2 * static_cast<std::size_t>(m)];
    }

    PhaseDistribution dist;
    dist.grid = make_grid(grid_points);
    dist.density.resize(dist.grid.size());
    for (std::size_t g = 0; g < dist.grid.size(); ++g) {
        const auto w = std::polar(1.0, -2.0 * (dist.grid[g] + lo_phase));
        dist.density[g] = squared_fourier_sum(pair_coeffs, w) / k_two_pi;
    }
    return dist;
}

PhaseDistribution phase_distribution_general(const TwoModeState& state, int grid_points) {
    if (std::abs(state.squared_norm() - 1.0) > k_norm_tolerance) {
        throw std::invalid_argument(
            "phase_distribution_general: state is not normalized within tolerance");
    }
    std::int64_t largest = 0;
    for (const auto& [n, block] : state.blocks) largest = std::max(largest, n);
    if (grid_points < std::max<std::int64_t>(4, 2 * largest)) {
        throw std::invalid_argument(
            "phase_distribution_general: grid too coarse for the largest block's harmonics");
    }

    PhaseDistribution dist;
    dist.grid = make_grid(grid_points);
    dist.density.assign(dist.grid.size(), 0.0);
    for (const auto& [n, block] : state.blocks) {
        for (std::size_t g = 0; g < dist.grid.size(); ++g) {
            const auto w = std::polar(1.0, -dist.grid[g]);
            dist.density[g] += squared_fourier_sum(block.amplitudes, w) / k_two_pi;
        }
    }
    return dist;
}

PhaseDistribution phase_distribution_general(const TwoModeBlock& block, int grid_points) {
    return phase_distribution_general(TwoModeState::from_block(block), grid_points);
}

WindowStats restricted_window_stats(const PhaseDistribution& dist, double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("restricted_window_stats: window is empty or reversed");
    }
    if (lo < 0.0 || hi > k_two_pi + 1e-12) {
        throw std::invalid_argument("restricted_window_stats: window must lie within [0, 2*pi]");
    }

    const double step = dist.grid_step();
    const auto first = static_cast<std::size_t>(std::ceil(lo / step - 1e-9));
    const auto last_d = std::floor(hi / step + 1e-9);
    const std::size_t last =
        std::min(dist.grid.size() - 1, static_cast<std::size_t>(std::max(0.0, last_d)));
    if (last < first + 1) {
        throw std::invalid_argument("restricted_window_stats: window holds fewer than two grid points");
    }

    // Trapezoid weights: half at the window ends, one elsewhere.
    auto trapezoid = [&](auto f) {
        double acc = 0.5 * (f(first) + f(last));
        for (std::size_t i = first + 1; i < last; ++i) acc += f(i);
        return acc * step;
    };

    const double mass = trapezoid([&](std::size_t i) { return dist.density[i]; });
    if (mass < 1e-12) {
        throw std::invalid_argument("restricted_window_stats: window mass below 1e-12");
    }
    const double mean =
        trapezoid([&](std::size_t i) { return dist.grid[i] * dist.density[i]; }) / mass;
    const double variance = trapezoid([&](std::size_t i) {
                                const double d = dist.grid[i] - mean;
                                return d * d * dist.density[i];
                            }) /
                            mass;
    return WindowStats{lo, hi, mean, variance, mass};
}

std::vector<std::pair<double, double>> log_variance_ratio_curve(std::span<const double> r_values,
                                                                double phi, double lo_phase,
                                                                int m_max, int grid_points) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(r_values.size());
    for (double r : r_values) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("log_variance_ratio_curve: r values must be positive");
        }
        const auto dist =
            phase_distribution_closed(SqueezeParams{r, phi}, lo_phase, m_max, grid_points);
        const auto stats = restricted_window_stats(dist, 0.0, std::numbers::pi);
        curve.emplace_back(r, std::log(stats.variance / k_uniform_half_window_variance));
    }
    return curve;
}

double least_squares_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("least_squares_slope: need at least two points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sqz
