#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sqz/analytic.hpp"
#include "sqz/fock.hpp"

// Brute-force oracle for the two-mode statistics. The observable
// n_bc = i(a† a0 - a0† a) conserves the total photon number N, so states are
// kept as per-N blocks and the observable acts as an (N+1)x(N+1) tridiagonal
// matrix inside each block. Moments are exact; no large-N approximation.

namespace sqz {

/// Amplitudes of one total-photon-number sector. Index k = photons in mode a,
/// so mode a0 holds n_total - k.
struct TwoModeBlock {
    std::int64_t n_total = 0;
    std::vector<std::complex<double>> amplitudes;  ///< length n_total + 1

    double squared_norm() const;
};

/// Superposition/mixture carrier over total photon number. The map keeps
/// blocks ordered by N, which makes downstream iteration deterministic.
struct TwoModeState {
    std::map<std::int64_t, TwoModeBlock> blocks;

    double squared_norm() const;
    static TwoModeState from_block(TwoModeBlock block);
};

/// n_bc restricted to one block: entry (k+1, k) = i*sqrt((k+1)(N-k)),
/// entry (k, k+1) its conjugate, zero diagonal. The gauge transform
/// |k> -> i^k |k> turns it into the real symmetric tridiagonal matrix with
/// off-diagonal offdiag[k] = sqrt((k+1)(N-k)), which is the form handed to
/// eigensolvers.
struct NbcGenerator {
    std::int64_t n_total = 0;
    std::vector<double> offdiag;  ///< length n_total; gauge (real) off-diagonal

    static NbcGenerator for_total(std::int64_t n_total);

    /// G |psi> in the complex block basis:
    /// (G psi)_k = i*offdiag[k-1]*psi_{k-1} - i*offdiag[k]*psi_{k+1}.
    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> amplitudes) const;
};

/// Eigendecomposition of one block generator. Eigenvalues are the lattice
/// {-N, -N+2, ..., +N} in ascending order; eigenvectors are stored in the
/// real gauge basis, column-major, orthonormal.
struct NbcSpectrum {
    std::int64_t n_total = 0;
    std::vector<double> eigenvalues;    ///< n_total + 1, ascending
    std::vector<double> eigenvectors;   ///< (n_total+1)^2, column j = eigenvector j

    double eigenvector(std::size_t row, std::size_t col) const {
        return eigenvectors[col * (static_cast<std::size_t>(n_total) + 1) + row];
    }
};

/// The state sum_m C_m |2m>_a |N-2m>_{a0} e^{i(N-2m) lo_phase} with C_m the
/// squeezed-vacuum coefficients. Throws if 2*m_max > n_total (the larger pair
/// numbers would need negative occupation in the LO mode).
TwoModeBlock build_entangled_state(const SqueezeParams& params, std::int64_t n_total,
                                   double lo_phase, int m_max);

/// Product of a signal vector in mode a with a truncated coherent state
/// |beta e^{i lo_phase}> in mode a0, reorganized into total-photon-number
/// blocks. Throws if the Poisson tail beyond cutoff_lo is not below 1e-9.
TwoModeState coherent_lo_state(double beta, double lo_phase, const FockVector& signal,
                               int cutoff_lo);

/// Exact mean and variance of n_bc, block by block. Route = oracle.
/// Throws if the state is not normalized within k_norm_tolerance.
VarianceReport nbc_moments(const TwoModeState& state);
VarianceReport nbc_moments(const TwoModeBlock& block);

/// Full spectral decomposition of the block generator (real symmetric
/// tridiagonal gauge form).
NbcSpectrum nbc_eigensystem(std::int64_t n_total);

/// Eigenvalues only, ascending. Cheaper than the full decomposition; used
/// when scanning many block sizes.
std::vector<double> nbc_eigenvalues(std::int64_t n_total);

/// Squared projections |<v_j|psi>|^2 of a block onto the spectrum's
/// eigenvectors; sums to the block's squared norm.
std::vector<double> outcome_probabilities(const NbcSpectrum& spectrum, const TwoModeBlock& block);

/// i.i.d. samples of the n_bc outcome: a block N is drawn by block norm, then
/// an eigenvalue by squared projection. Outcomes are the exact integers
/// N - 2j. Deterministic given the seed; sample i depends only on (seed, i),
/// so any partition of the index range reproduces the same sequence.
std::vector<std::int64_t> sample_nbc(const TwoModeState& state, std::size_t n_samples,
                                     std::uint64_t seed);

namespace rng {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014): bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t z);

/// Draw `index` of the counter-based stream for `seed`:
/// mix64(seed + (index+1) * 0x9E3779B97F4A7C15), identical to the SplitMix64
/// sequence and random-access in the index.
std::uint64_t draw(std::uint64_t seed, std::uint64_t index);

/// Map 64 random bits to a double in [0, 1) using the top 53 bits.
double unit_double(std::uint64_t bits);

}  // namespace rng

}  // namespace sqz
