// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Tolerances are pinned in this file, not configurable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "sqz/analytic.hpp"
#include "sqz/block.hpp"
#include "sqz/fock.hpp"
#include "sqz/phase.hpp"

namespace {

constexpr double k_pi = std::numbers::pi;
int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SQZSIM_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    RunResult result;
    if (pipe == nullptr) return result;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Relative check where the prediction is away from zero, absolute near the
// squeezing minimum: prediction > 0.05 * scale -> relative <= rel_tol,
// otherwise |difference| <= 0.03 * scale.
bool guarded_match(double oracle, double predicted, double scale, double rel_tol,
                   double* worst_rel) {
    if (predicted > 0.05 * scale) {
        const double rel = std::abs(oracle - predicted) / predicted;
        *worst_rel = std::max(*worst_rel, rel);
        return rel <= rel_tol;
    }
    return std::abs(oracle - predicted) <= 0.03 * scale;
}

void criterion_1_squeezing_law() {
    const double phi = 0.7;
    bool pass = true;
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const sqz::SqueezeParams params{r, phi};
        const double theta_min = phi / 2.0;
        const double theta_max = (k_pi + phi) / 2.0;
        const double lo = 100.0 * std::exp(-2.0 * r);
        const double hi = 100.0 * std::exp(2.0 * r);
        for (const auto& [value, expected] :
             {std::pair{sqz::nbc_variance_fock(100, params, theta_min).variance, lo},
              std::pair{sqz::nbc_variance_coherent(10.0, params, theta_min).variance, lo},
              std::pair{sqz::nbc_variance_fock(100, params, theta_max).variance, hi},
              std::pair{sqz::nbc_variance_coherent(10.0, params, theta_max).variance, hi}}) {
            const double rel = std::abs(value - expected) / expected;
            worst = std::max(worst, rel);
            pass = pass && rel <= 1e-12;
        }
    }
    report(1, "squeezing law N e^{-2r} / N e^{+2r} on both analytic routes (rel 1e-12)", pass,
           "worst rel " + fmt(worst));
}

void criterion_2_appendix_closure() {
    double worst = 0.0;
    double first_bad = -1.0;
    for (int i = 0; i <= 30; ++i) {
        const double r = 0.1 * static_cast<double>(i);
        const auto [a, b] = sqz::appendix_series_ab(r, 200);
        const auto [ac, bc] = sqz::closed_form_ab(r);
        const double dev = std::max(std::abs(a - ac), std::abs(b - bc));
        if (dev >= 1e-9 && first_bad < 0.0) first_bad = r;
        worst = std::max(worst, dev);
    }
    const bool pass = worst < 1e-9;
    std::string detail = "max |series - closed| " + fmt(worst);
    if (!pass) detail += ", first violation at r = " + fmt(first_bad);
    report(2, "appendix series reach the closed forms at m_max = 200, r in [0, 3] (1e-9)", pass,
           detail);
}

void criterion_3_oracle_formula() {
    const sqz::SqueezeParams params{1.0, 0.0};
    const int m_max = std::min<std::int64_t>(sqz::truncation_for_tolerance(1.0, 1e-12), 100);
    bool pass = true;
    double worst_rel = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double theta = static_cast<double>(k) * k_pi / 16.0;
        const auto block = sqz::build_entangled_state(params, 200, theta - k_pi / 2.0, m_max);
        const double oracle = sqz::nbc_moments(block).variance;
        const double predicted = sqz::nbc_variance_fock(200, params, theta).variance;
        pass = guarded_match(oracle, predicted, 200.0, 0.03, &worst_rel) && pass;
    }

    auto rel_at_min = [&](std::int64_t n) {
        const auto block = sqz::build_entangled_state(params, n, -k_pi / 2.0, m_max);
        const double oracle = sqz::nbc_moments(block).variance;
        const double predicted = sqz::nbc_variance_fock(n, params, 0.0).variance;
        return std::abs(oracle - predicted) / predicted;
    };
    const double e200 = rel_at_min(200);
    const double e400 = rel_at_min(400);
    pass = pass && e400 < e200;
    report(3, "fixed-N oracle matches the closed form (N = 200, 3%, error halves at N = 400)",
           pass, "worst rel " + fmt(worst_rel) + ", min-theta rel " + fmt(e200) + " -> " +
                     fmt(e400));
}

void criterion_4_coherent_lo_oracle() {
    const double beta = 4.0;
    const sqz::SqueezeParams params{0.8, 0.0};
    const auto signal =
        sqz::squeezed_vacuum_coefficients(params, sqz::truncation_for_tolerance(0.8, 1e-12));
    const int cutoff_lo = 66;  // beta^2 + 10 beta + 10
    bool pass = true;
    double worst_rel = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double theta = static_cast<double>(k) * k_pi / 8.0;
        const auto state = sqz::coherent_lo_state(beta, theta - k_pi / 2.0, signal, cutoff_lo);
        const double oracle = sqz::nbc_moments(state).variance;
        const double predicted = sqz::nbc_variance_coherent(beta, params, theta).variance;
        pass = guarded_match(oracle, predicted, beta * beta, 0.05, &worst_rel) && pass;
    }
    report(4, "coherent-LO oracle within 5% of the strong-LO formula (beta = 4, r = 0.8)", pass,
           "worst rel " + fmt(worst_rel) +
               (pass ? "" : " (exact variance = formula + sinh^2 r; gap peaks at the squeezing "
                            "minimum)"));
}

void criterion_5_shot_noise() {
    sqz::TwoModeBlock block;
    block.n_total = 200;
    block.amplitudes.assign(201, {0.0, 0.0});
    block.amplitudes[0] = 1.0;
    const auto state = sqz::TwoModeState::from_block(block);
    const auto exact = sqz::nbc_moments(state);
    const double exact_rel = std::abs(exact.variance - 200.0) / 200.0;

    const auto samples = sqz::sample_nbc(state, 100000, 42);
    const auto samples_again = sqz::sample_nbc(state, 100000, 42);
    double mean = 0.0;
    for (auto v : samples) mean += static_cast<double>(v);
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (auto v : samples) {
        const double d = static_cast<double>(v) - mean;
        var += d * d;
    }
    var /= static_cast<double>(samples.size() - 1);
    const double mc_rel = std::abs(var - 200.0) / 200.0;

    const bool pass = exact_rel <= 1e-9 && mc_rel <= 0.05 && samples == samples_again;
    report(5, "shot-noise baseline |0, N>: exact N and 1e5-sample Monte Carlo within 5%", pass,
           "exact rel " + fmt(exact_rel) + ", MC rel " + fmt(mc_rel));
}

void criterion_6_spectrum() {
    double worst = 0.0;
    for (std::int64_t n : {1, 2, 50, 200}) {
        const auto eigenvalues = sqz::nbc_eigenvalues(n);
        for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
            const double expected = -static_cast<double>(n) + 2.0 * static_cast<double>(j);
            worst = std::max(worst, std::abs(eigenvalues[j] - expected));
        }
    }
    report(6, "block spectrum matches {N - 2j} for N in {1, 2, 50, 200} (1e-8)", worst <= 1e-8,
           "max dev " + fmt(worst));
}

void criterion_7_fig2a() {
    bool pass = true;
    std::vector<double> window_variances;
    for (double r : {1.0, 2.0}) {
        const auto dist = sqz::phase_distribution_closed(sqz::SqueezeParams{r, 0.0}, 0.0, 200, 4096);
        const double step = dist.grid_step();
        const std::size_t peak = dist.argmax();
        pass = pass && std::abs(dist.grid[peak] - k_pi / 2.0) <= step + 1e-12;
        // Locate the maximum on the upper half circle as well.
        std::size_t upper = dist.density.size() / 2;
        for (std::size_t g = upper; g < dist.density.size(); ++g) {
            if (dist.density[g] > dist.density[upper]) upper = g;
        }
        pass = pass && std::abs(dist.grid[upper] - 3.0 * k_pi / 2.0) <= step + 1e-12;
        window_variances.push_back(sqz::restricted_window_stats(dist, 0.0, k_pi).variance);
    }
    pass = pass && window_variances[1] < window_variances[0];
    report(7, "Fig 2(a): peaks at pi/2 and 3 pi/2 within one grid step, r = 2 narrower than r = 1",
           pass,
           "window variances " + fmt(window_variances[0]) + " -> " + fmt(window_variances[1]));
}

void criterion_8_fig2b() {
    std::vector<double> r_values(21);
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        r_values[i] = 0.5 + 0.1 * static_cast<double>(i);
    }
    const auto curve = sqz::log_variance_ratio_curve(r_values, 0.0, 0.0, 200, 4096);
    const double slope = sqz::least_squares_slope(curve);

    const auto uniform = sqz::phase_distribution_closed(sqz::SqueezeParams{0.0, 0.0}, 0.0, 0, 1 << 18);
    const auto baseline = sqz::restricted_window_stats(uniform, 0.0, k_pi);
    const double baseline_rel = std::abs(baseline.variance - sqz::k_uniform_half_window_variance) /
                                sqz::k_uniform_half_window_variance;

    const bool pass = std::abs(slope + 1.0) <= 0.15 && baseline_rel <= 1e-9;
    report(8, "Fig 2(b): width-law slope -1.0 +- 0.15 with baseline pi^2/12 (1e-9)", pass,
           "slope " + fmt(slope) + ", baseline rel " + fmt(baseline_rel));
}

void criterion_9_route_equivalence() {
    const sqz::SqueezeParams params{1.0, 0.0};
    const int m_max = 50;
    const double varphi = 0.3;
    const auto closed = sqz::phase_distribution_closed(params, varphi, m_max, 4096);
    const auto reference = sqz::phase_distribution_general(
        sqz::build_entangled_state(params, 200, varphi, m_max), 4096);

    double worst_routes = 0.0;
    for (std::size_t g = 0; g < closed.density.size(); ++g) {
        worst_routes = std::max(worst_routes, std::abs(closed.density[g] - reference.density[g]));
    }
    double worst_n = 0.0;
    for (std::int64_t n : {100, 400}) {
        const auto other = sqz::phase_distribution_general(
            sqz::build_entangled_state(params, n, varphi, m_max), 4096);
        for (std::size_t g = 0; g < reference.density.size(); ++g) {
            worst_n = std::max(worst_n, std::abs(reference.density[g] - other.density[g]));
        }
    }
    const bool pass = worst_routes < 1e-10 && worst_n < 1e-10;
    report(9, "projector route equals the closed form pointwise and is N-independent (1e-10)",
           pass, "route dev " + fmt(worst_routes) + ", N dev " + fmt(worst_n));
}

void criterion_10_poisson_mixture() {
    double worst = 0.0;
    for (double r : {0.0, 1.0}) {
        const sqz::SqueezeParams params{r, 0.0};
        for (double theta : {0.0, 0.6, k_pi / 2.0}) {
            const double mixture = sqz::poisson_mixture_variance(10.0, params, theta).variance;
            const double fixed = sqz::nbc_variance_fock(100, params, theta).variance;
            worst = std::max(worst, std::abs(mixture - fixed) / fixed);
        }
    }
    report(10, "Poisson mixture at alpha^2 = 100 equals the fixed-N formula (rel 1e-7)",
           worst <= 1e-7, "worst rel " + fmt(worst));
}

void criterion_11_determinism() {
    const auto check_a = run_cli("check");
    const auto check_b = run_cli("check");
    const std::string sample_args = "sample --n-total 50 --r 0.5 --samples 1000 --seed 42";
    const auto sample_a = run_cli(sample_args);
    const auto sample_b = run_cli(sample_args);
    const bool pass = !check_a.output.empty() && check_a.output == check_b.output &&
                      check_a.exit_code == check_b.exit_code && !sample_a.output.empty() &&
                      sample_a.output == sample_b.output && sample_a.exit_code == 0;
    report(11, "repeated `check` and `sample --seed 42` runs are byte-identical", pass,
           "check bytes " + std::to_string(check_a.output.size()) + ", sample bytes " +
               std::to_string(sample_a.output.size()));
}

}  // namespace

int main() {
    criterion_1_squeezing_law();
    criterion_2_appendix_closure();
    criterion_3_oracle_formula();
    criterion_4_coherent_lo_oracle();
    criterion_5_shot_noise();
    criterion_6_spectrum();
    criterion_7_fig2a();
    criterion_8_fig2b();
    criterion_9_route_equivalence();
    criterion_10_poisson_mixture();
    criterion_11_determinism();

    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures;
}
