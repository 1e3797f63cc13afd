#include "sqz/block.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz {

namespace {

constexpr std::complex<double> k_i{0.0, 1.0};

// (-i)^k, cycling {1, -i, -1, i}: the gauge factor that maps block
// amplitudes into the real-symmetric tridiagonal basis.
std::complex<double> inverse_gauge(std::int64_t k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

void require_normalized(double squared_norm, const char* who) {
    if (std::abs(squared_norm - 1.0) > k_norm_tolerance) {
        throw std::invalid_argument(std::string(who) +
                                    ": state is not normalized within tolerance");
    }
}

}  // namespace

double TwoModeBlock::squared_norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum;
}

double TwoModeState::squared_norm() const {
    double sum = 0.0;
    for (const auto& [n, block] : blocks) sum += block.squared_norm();
    return sum;
}

TwoModeState TwoModeState::from_block(TwoModeBlock block) {
    TwoModeState state;
    const auto n = block.n_total;
    state.blocks.emplace(n, std::move(block));
    return state;
}

NbcGenerator NbcGenerator::for_total(std::int64_t n_total) {
    if (n_total < 0) throw std::invalid_argument("NbcGenerator: n_total must be >= 0");
    NbcGenerator gen;
    gen.n_total = n_total;
    gen.offdiag.resize(static_cast<std::size_t>(n_total));
    for (std::int64_t k = 0; k < n_total; ++k) {
        gen.offdiag[static_cast<std::size_t>(k)] =
            std::sqrt(static_cast<double>(k + 1) * static_cast<double>(n_total - k));
    }
    return gen;
}

std::vector<std::complex<double>> NbcGenerator::apply(
    std::span<const std::complex<double>> amplitudes) const {
    const std::size_t dim = static_cast<std::size_t>(n_total) + 1;
    if (amplitudes.size() != dim) {
        throw std::invalid_argument("NbcGenerator::apply: amplitude length does not match block");
    }
    std::vector<std::complex<double>> out(dim, {0.0, 0.0});
    for (std::size_t k = 0; k < dim; ++k) {
        std::complex<double> acc{0.0, 0.0};
        if (k > 0) acc += k_i * offdiag[k - 1] * amplitudes[k - 1];
        if (k + 1 < dim) acc -= k_i * offdiag[k] * amplitudes[k + 1];
        out[k] = acc;
    }
    return out;
}

TwoModeBlock build_entangled_state(const SqueezeParams& params, std::int64_t n_total,
                                   double lo_phase, int m_max) {
    if (n_total < 0) throw std::invalid_argument("build_entangled_state: n_total must be >= 0");
    if (m_max < 0) throw std::invalid_argument("build_entangled_state: m_max must be >= 0");
    if (2 * static_cast<std::int64_t>(m_max) > n_total) {
        throw std::invalid_argument(
            "build_entangled_state: 2*m_max exceeds n_total (the LO mode would need negative "
            "occupation)");
    }
    const FockVector coeffs = squeezed_vacuum_coefficients(params, m_max);
    TwoModeBlock block;
    block.n_total = n_total;
    block.amplitudes.assign(static_cast<std::size_t>(n_total) + 1, {0.0, 0.0});
    for (int m = 0; m <= m_max; ++m) {
        const std::size_t k = 2 * static_cast<std::size_t>(m);
        const double lo_photons = static_cast<double>(n_total - 2 * static_cast<std::int64_t>(m));
        block.amplitudes[k] = coeffs.amplitudes[k] * std::polar(1.0, lo_photons * lo_phase);
    }
    return block;
}

TwoModeState coherent_lo_state(double beta, double lo_phase, const FockVector& signal,
                               int cutoff_lo) {
    if (!(beta >= 0.0)) throw std::invalid_argument("coherent_lo_state: beta must be >= 0");
    if (cutoff_lo < 0) throw std::invalid_argument("coherent_lo_state: cutoff_lo must be >= 0");
    if (signal.amplitudes.empty()) {
        throw std::invalid_argument("coherent_lo_state: signal has no amplitudes");
    }

    // Truncated coherent amplitudes d_n = e^{-beta^2/2} beta^n / sqrt(n!) e^{i n lo_phase},
    // magnitudes in log space.
    const std::size_t lo_dim = static_cast<std::size_t>(cutoff_lo) + 1;
    std::vector<std::complex<double>> lo(lo_dim, {0.0, 0.0});
    double lo_mass = 0.0;
    if (beta == 0.0) {
        lo[0] = {1.0, 0.0};
        lo_mass = 1.0;
    } else {
        const double log_beta = std::log(beta);
        for (std::size_t n = 0; n < lo_dim; ++n) {
            const double nn = static_cast<double>(n);
            const double mag =
                std::exp(-0.5 * beta * beta + nn * log_beta - 0.5 * std::lgamma(nn + 1.0));
            lo[n] = std::polar(mag, nn * lo_phase);
            lo_mass += mag * mag;
        }
    }
    if (1.0 - lo_mass >= 1e-9) {
        throw std::invalid_argument(
            "coherent_lo_state: coherent tail beyond cutoff_lo is not below 1e-9");
    }

    const std::int64_t sig_cut = signal.cutoff();
    TwoModeState state;
    for (std::int64_t n = 0; n <= sig_cut + cutoff_lo; ++n) {
        TwoModeBlock block;
        block.n_total = n;
        block.amplitudes.assign(static_cast<std::size_t>(n) + 1, {0.0, 0.0});
        const std::int64_t k_lo = std::max<std::int64_t>(0, n - cutoff_lo);
        const std::int64_t k_hi = std::min(n, sig_cut);
        bool nonzero = false;
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            const auto amp = signal.amplitudes[static_cast<std::size_t>(k)] *
                             lo[static_cast<std::size_t>(n - k)];
            block.amplitudes[static_cast<std::size_t>(k)] = amp;
            nonzero = nonzero || amp != std::complex<double>{0.0, 0.0};
        }
        if (nonzero) state.blocks.emplace(n, std::move(block));
    }
    return state;
}

VarianceReport nbc_moments(const TwoModeState& state) {
    require_normalized(state.squared_norm(), "nbc_moments");
    std::complex<double> mean_acc{0.0, 0.0};
    double second_moment = 0.0;
    for (const auto& [n, block] : state.blocks) {
        const auto gen = NbcGenerator::for_total(n);
        const auto g_psi = gen.apply(block.amplitudes);
        for (std::size_t k = 0; k < g_psi.size(); ++k) {
            mean_acc += std::conj(block.amplitudes[k]) * g_psi[k];
            second_moment += std::norm(g_psi[k]);
        }
    }
    const double mean = mean_acc.real();
    return VarianceReport{mean, second_moment - mean * mean, Route::oracle};
}

VarianceReport nbc_moments(const TwoModeBlock& block) {
    TwoModeState state;
    state.blocks.emplace(block.n_total, block);
    return nbc_moments(state);
}

NbcSpectrum nbc_eigensystem(std::int64_t n_total) {
    const auto gen = NbcGenerator::for_total(n_total);
    const auto dim = static_cast<Eigen::Index>(n_total) + 1;

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::Map<const Eigen::VectorXd> subdiag(gen.offdiag.data(), dim - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("nbc_eigensystem: tridiagonal eigensolver failed");
    }

    NbcSpectrum spectrum;
    spectrum.n_total = n_total;
    spectrum.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    spectrum.eigenvectors.assign(solver.eigenvectors().data(),
                                 solver.eigenvectors().data() + dim * dim);
    return spectrum;
}

std::vector<double> nbc_eigenvalues(std::int64_t n_total) {
    const auto gen = NbcGenerator::for_total(n_total);
    const auto dim = static_cast<Eigen::Index>(n_total) + 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::Map<const Eigen::VectorXd> subdiag(gen.offdiag.data(), dim - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("nbc_eigenvalues: tridiagonal eigensolver failed");
    }
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + dim};
}

std::vector<double> outcome_probabilities(const NbcSpectrum& spectrum, const TwoModeBlock& block) {
    if (spectrum.n_total != block.n_total) {
        throw std::invalid_argument("outcome_probabilities: spectrum/block size mismatch");
    }
    const std::size_t dim = static_cast<std::size_t>(block.n_total) + 1;

    // Gauge-transform the amplitudes once, then one dense pass per eigenvector.
    std::vector<std::complex<double>> gauged(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        gauged[k] = inverse_gauge(static_cast<std::int64_t>(k)) * block.amplitudes[k];
    }

    std::vector<double> probs(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        const double* column = spectrum.eigenvectors.data() + j * dim;
        std::complex<double> proj{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) proj += column[k] * gauged[k];
        probs[j] = std::norm(proj);
    }
    return probs;
}

namespace rng {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t draw(std::uint64_t seed, std::uint64_t index) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return mix64(seed + (index + 1) * golden);
}

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace rng

std::vector<std::int64_t> sample_nbc(const TwoModeState& state, std::size_t n_samples,
                                     std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("sample_nbc: n_samples must be positive");
    require_normalized(state.squared_norm(), "sample_nbc");

    struct BlockSampler {
        std::int64_t n_total;
        std::vector<double> cumulative;  // over outcomes j, sums to block mass
    };

    std::vector<BlockSampler> samplers;
    std::vector<double> block_cumulative;
    samplers.reserve(state.blocks.size());
    double total = 0.0;
    for (const auto& [n, block] : state.blocks) {
        const auto spectrum = nbc_eigensystem(n);
        auto probs = outcome_probabilities(spectrum, block);
        double acc = 0.0;
        for (auto& p : probs) {
            acc += p;
            p = acc;  // in-place cumulative
        }
        total += block.squared_norm();
        block_cumulative.push_back(total);
        samplers.push_back(BlockSampler{n, std::move(probs)});
    }

    std::vector<std::int64_t> samples(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double u_block = rng::unit_double(rng::draw(seed, 2 * i));
        const auto b_it = std::upper_bound(block_cumulative.begin(), block_cumulative.end(),
                                           u_block * total);
        const std::size_t b = std::min<std::size_t>(
            static_cast<std::size_t>(b_it - block_cumulative.begin()), samplers.size() - 1);
        const auto& sampler = samplers[b];

        const double mass = sampler.cumulative.back();
        const double u_outcome = rng::unit_double(rng::draw(seed, 2 * i + 1));
        const auto o_it = std::upper_bound(sampler.cumulative.begin(), sampler.cumulative.end(),
                                           u_outcome * mass);
        const std::size_t j = std::min<std::size_t>(
            static_cast<std::size_t>(o_it - sampler.cumulative.begin()),
            sampler.cumulative.size() - 1);
        samples[i] = -sampler.n_total + 2 * static_cast<std::int64_t>(j);
    }
    return samples;
}

}  // namespace sqz
