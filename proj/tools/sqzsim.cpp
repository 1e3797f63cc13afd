// sqzsim: command-line front end for the squeezed-vacuum homodyne engine.
//
// Every subcommand emits a machine-readable table (CSV by default, JSON with
// --format json): a comment line with the full parameter set, a header row,
// data rows, and optional trailing summary comments. Identical invocations
// produce byte-identical output. Angles are radians everywhere.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sqz/analytic.hpp"
#include "sqz/block.hpp"
#include "sqz/fock.hpp"
#include "sqz/phase.hpp"

namespace {

using json = nlohmann::ordered_json;
constexpr double k_pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Table emission

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

using Cell = std::variant<std::int64_t, double, std::string>;

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
    return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
    if (std::holds_alternative<double>(c)) return json::parse(fmt_double(std::get<double>(c)));
    return std::get<std::string>(c);
}

struct Table {
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> summary;

    void param(const std::string& key, const Cell& value) { params.emplace_back(key, cell_text(value)); }
    void note(const std::string& key, const Cell& value) { summary.emplace_back(key, cell_text(value)); }
};

void write_csv(std::ostream& os, const Table& t) {
    os << "#";
    for (const auto& [k, v] : t.params) os << " " << k << "=" << v;
    os << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << cell_text(row[i]);
        }
        os << "\n";
    }
    for (const auto& [k, v] : t.summary) os << "# " << k << " = " << v << "\n";
}

void write_json(std::ostream& os, const Table& t) {
    json j;
    j["params"] = json::object();
    for (const auto& [k, v] : t.params) j["params"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
        json jr = json::array();
        for (const auto& c : row) jr.push_back(cell_json(c));
        j["rows"].push_back(std::move(jr));
    }
    if (!t.summary.empty()) {
        j["summary"] = json::object();
        for (const auto& [k, v] : t.summary) j["summary"][k] = v;
    }
    os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Shared CLI pieces

struct OutputOptions {
    std::string path;           // empty -> stdout
    std::string format = "csv";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.path, "Write output to PATH instead of standard output");
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void deliver(const OutputOptions& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + out.path);
    file << text;
}

void deliver_table(const OutputOptions& out, const Table& t) {
    std::ostringstream os;
    if (out.format == "json") {
        write_json(os, t);
    } else {
        write_csv(os, t);
    }
    deliver(out, os.str());
}

// theta = varphi + pi/2; exactly one of the two may be given.
struct AngleChoice {
    std::optional<double> theta;
    std::optional<double> varphi;

    bool given() const { return theta || varphi; }
    double resolved_theta() const { return theta ? *theta : *varphi + k_pi / 2.0; }
    double resolved_varphi() const { return varphi ? *varphi : *theta - k_pi / 2.0; }
};

void add_angle_options(CLI::App* cmd, AngleChoice& angle) {
    auto* t = cmd->add_option("--theta", angle.theta, "Quadrature angle theta (radians)");
    auto* v = cmd->add_option("--varphi", angle.varphi,
                              "Local-oscillator phase varphi (radians); theta = varphi + pi/2");
    t->excludes(v);
    v->excludes(t);
}

std::vector<double> theta_sweep(const AngleChoice& angle, int points) {
    if (angle.given()) return {angle.resolved_theta()};
    std::vector<double> sweep(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) sweep[static_cast<std::size_t>(k)] = k * k_pi / points;
    return sweep;
}

int default_m_max(double r) { return sqz::truncation_for_tolerance(r, 1e-12); }

int default_lo_cutoff(double beta) {
    return static_cast<int>(std::ceil(beta * beta + 10.0 * beta + 10.0));
}

// ---------------------------------------------------------------------------
// Subcommands

int run_coeffs(double r, double phi, std::optional<int> m_max_opt, const OutputOptions& out) {
    const sqz::SqueezeParams params{r, phi};
    const int m_max = m_max_opt ? *m_max_opt : default_m_max(r);
    const auto state = sqz::squeezed_vacuum_coefficients(params, m_max);

    Table t;
    t.param("subcommand", std::string("coeffs"));
    t.param("r", r);
    t.param("phi", params.phi);
    t.param("m_max", static_cast<std::int64_t>(m_max));
    t.columns = {"m", "real", "imag", "prob"};
    for (int m = 0; m <= m_max; ++m) {
        const auto c = state.amplitudes[2 * static_cast<std::size_t>(m)];
        t.rows.push_back({static_cast<std::int64_t>(m), c.real(), c.imag(), std::norm(c)});
    }
    t.note("squared_norm", state.squared_norm());
    deliver_table(out, t);
    return 0;
}

struct VarianceArgs {
    double r = 0.0;
    double phi = 0.0;
    std::optional<double> beta;
    std::optional<std::int64_t> n_total;
    std::optional<double> alpha;
    AngleChoice angle;
    int points = 16;
};

int run_variance(const VarianceArgs& a, const OutputOptions& out) {
    if (!a.beta && !a.n_total) {
        throw CLI::ValidationError("variance", "give --beta and/or --n-total");
    }
    const double beta = a.beta ? *a.beta : std::sqrt(static_cast<double>(*a.n_total));
    const std::int64_t n_total =
        a.n_total ? *a.n_total : static_cast<std::int64_t>(std::llround(beta * beta));
    // Poisson route: explicit --alpha, or alpha = beta when the +-8 sigma
    // window precondition is satisfiable (alpha^2 >= 25).
    std::optional<double> alpha = a.alpha;
    if (!alpha && beta * beta >= 25.0) alpha = beta;

    const sqz::SqueezeParams params{a.r, a.phi};
    Table t;
    t.param("subcommand", std::string("variance"));
    t.param("r", a.r);
    t.param("phi", params.phi);
    t.param("beta", beta);
    t.param("n_total", n_total);
    if (alpha) t.param("alpha", *alpha);
    t.columns = {"theta", "route", "mean", "variance"};
    for (double theta : theta_sweep(a.angle, a.points)) {
        const auto coh = sqz::nbc_variance_coherent(beta, params, theta);
        const auto fock = sqz::nbc_variance_fock(n_total, params, theta);
        t.rows.push_back({theta, std::string(sqz::route_name(coh.route)), coh.mean, coh.variance});
        t.rows.push_back({theta, std::string(sqz::route_name(fock.route)), fock.mean, fock.variance});
        if (alpha) {
            const auto mix = sqz::poisson_mixture_variance(*alpha, params, theta);
            t.rows.push_back({theta, std::string(sqz::route_name(mix.route)), mix.mean, mix.variance});
        }
    }
    if (alpha) t.note("poisson_relative_spread", sqz::poisson_relative_spread(*alpha));
    deliver_table(out, t);
    return 0;
}

struct OracleArgs {
    double r = 0.0;
    double phi = 0.0;
    std::optional<std::int64_t> n_total;
    std::optional<double> beta;
    std::optional<int> m_max;
    std::optional<int> cutoff_lo;
    AngleChoice angle;
    int points = 8;
};

int run_oracle(const OracleArgs& a, const OutputOptions& out) {
    if (a.n_total.has_value() == a.beta.has_value()) {
        throw CLI::ValidationError("oracle", "give exactly one of --n-total or --beta");
    }
    const sqz::SqueezeParams params{a.r, a.phi};

    Table t;
    t.param("subcommand", std::string("oracle"));
    t.param("r", a.r);
    t.param("phi", params.phi);
    t.columns = {"theta", "oracle_mean", "oracle_variance", "analytic_variance", "rel_error"};

    auto push_row = [&t](double theta, const sqz::VarianceReport& oracle, double analytic) {
        const double rel = analytic != 0.0 ? std::abs(oracle.variance - analytic) / analytic
                                           : std::abs(oracle.variance);
        t.rows.push_back({theta, oracle.mean, oracle.variance, analytic, rel});
    };

    if (a.n_total) {
        const std::int64_t n = *a.n_total;
        const int m_max = a.m_max
                              ? *a.m_max
                              : std::min<std::int64_t>(default_m_max(a.r), n / 2);
        t.param("state", std::string("eq5-block"));
        t.param("n_total", n);
        t.param("m_max", static_cast<std::int64_t>(m_max));
        for (double theta : theta_sweep(a.angle, a.points)) {
            const double varphi = theta - k_pi / 2.0;
            const auto block = sqz::build_entangled_state(params, n, varphi, m_max);
            const auto oracle = sqz::nbc_moments(block);
            push_row(theta, oracle, sqz::nbc_variance_fock(n, params, theta).variance);
        }
    } else {
        const double beta = *a.beta;
        const int m_max = a.m_max ? *a.m_max : default_m_max(a.r);
        const int cutoff_lo = a.cutoff_lo ? *a.cutoff_lo : default_lo_cutoff(beta);
        t.param("state", std::string("coherent-lo"));
        t.param("beta", beta);
        t.param("m_max", static_cast<std::int64_t>(m_max));
        t.param("cutoff_lo", static_cast<std::int64_t>(cutoff_lo));
        const auto signal = sqz::squeezed_vacuum_coefficients(params, m_max);
        for (double theta : theta_sweep(a.angle, a.points)) {
            const double varphi = theta - k_pi / 2.0;
            const auto state = sqz::coherent_lo_state(beta, varphi, signal, cutoff_lo);
            const auto oracle = sqz::nbc_moments(state);
            push_row(theta, oracle, sqz::nbc_variance_coherent(beta, params, theta).variance);
        }
    }
    deliver_table(out, t);
    return 0;
}

struct SampleArgs {
    double r = 0.0;
    double phi = 0.0;
    std::optional<std::int64_t> n_total;
    std::optional<double> beta;
    std::optional<int> m_max;
    std::optional<int> cutoff_lo;
    AngleChoice angle;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
};

int run_sample(const SampleArgs& a, const OutputOptions& out) {
    if (a.n_total.has_value() == a.beta.has_value()) {
        throw CLI::ValidationError("sample", "give exactly one of --n-total or --beta");
    }
    const sqz::SqueezeParams params{a.r, a.phi};
    const double varphi = a.angle.given() ? a.angle.resolved_varphi() : 0.0;

    Table t;
    t.param("subcommand", std::string("sample"));
    t.param("r", a.r);
    t.param("phi", params.phi);
    t.param("varphi", varphi);

    sqz::TwoModeState state;
    if (a.n_total) {
        const std::int64_t n = *a.n_total;
        const int m_max =
            a.m_max ? *a.m_max : std::min<std::int64_t>(default_m_max(a.r), n / 2);
        t.param("state", std::string("eq5-block"));
        t.param("n_total", n);
        t.param("m_max", static_cast<std::int64_t>(m_max));
        state = sqz::TwoModeState::from_block(sqz::build_entangled_state(params, n, varphi, m_max));
    } else {
        const double beta = *a.beta;
        const int m_max = a.m_max ? *a.m_max : default_m_max(a.r);
        const int cutoff_lo = a.cutoff_lo ? *a.cutoff_lo : default_lo_cutoff(beta);
        t.param("state", std::string("coherent-lo"));
        t.param("beta", beta);
        t.param("m_max", static_cast<std::int64_t>(m_max));
        t.param("cutoff_lo", static_cast<std::int64_t>(cutoff_lo));
        state = sqz::coherent_lo_state(beta, varphi,
                                       sqz::squeezed_vacuum_coefficients(params, m_max), cutoff_lo);
    }
    t.param("samples", static_cast<std::int64_t>(a.samples));
    t.param("seed", static_cast<std::int64_t>(a.seed));

    const auto values = sqz::sample_nbc(state, a.samples, a.seed);
    double mean = 0.0;
    for (auto v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (auto v : values) {
        const double d = static_cast<double>(v) - mean;
        var += d * d;
    }
    var /= values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;

    t.columns = {"index", "n_bc"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        t.rows.push_back({static_cast<std::int64_t>(i), values[i]});
    }
    t.note("route", std::string(sqz::route_name(sqz::Route::monte_carlo)));
    t.note("count", static_cast<std::int64_t>(values.size()));
    t.note("sample_mean", mean);
    t.note("sample_variance", var);
    deliver_table(out, t);
    return 0;
}

struct PhaseArgs {
    double r = 0.0;
    double phi = 0.0;
    double varphi = 0.0;
    int m_max = 200;
    int grid_points = 4096;
    std::string route = "closed";
    std::optional<std::int64_t> n_total;
};

int run_phase(const PhaseArgs& a, const OutputOptions& out) {
    const sqz::SqueezeParams params{a.r, a.phi};
    const bool want_closed = a.route == "closed" || a.route == "both";
    const bool want_general = a.route == "general" || a.route == "both";
    const std::int64_t n_total = a.n_total ? *a.n_total : 2 * static_cast<std::int64_t>(a.m_max);

    Table t;
    t.param("subcommand", std::string("phase"));
    t.param("r", a.r);
    t.param("phi", params.phi);
    t.param("varphi", a.varphi);
    t.param("m_max", static_cast<std::int64_t>(a.m_max));
    t.param("grid_points", static_cast<std::int64_t>(a.grid_points));
    t.param("route", a.route);
    if (want_general) t.param("n_total", n_total);

    std::optional<sqz::PhaseDistribution> closed;
    std::optional<sqz::PhaseDistribution> general;
    if (want_closed) {
        closed = sqz::phase_distribution_closed(params, a.varphi, a.m_max, a.grid_points);
    }
    if (want_general) {
        const auto block = sqz::build_entangled_state(params, n_total, a.varphi, a.m_max);
        general = sqz::phase_distribution_general(block, a.grid_points);
    }

    const auto& grid = want_closed ? closed->grid : general->grid;
    t.columns = {"phi_grid"};
    if (want_closed && want_general) {
        t.columns.push_back("density_closed");
        t.columns.push_back("density_general");
    } else {
        t.columns.push_back("density");
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<Cell> row{grid[g]};
        if (want_closed) row.push_back(closed->density[g]);
        if (want_general) row.push_back(general->density[g]);
        t.rows.push_back(std::move(row));
    }
    if (want_closed) t.note("integral_closed", closed->integral());
    if (want_general) t.note("integral_general", general->integral());
    deliver_table(out, t);
    return 0;
}

int run_fig2a(int grid_points, const OutputOptions& out) {
    // Published parameter choices: r = 1 and r = 2, phi = 0, varphi = 0, m_max = 200.
    const int m_max = 200;
    const auto dist1 =
        sqz::phase_distribution_closed(sqz::SqueezeParams{1.0, 0.0}, 0.0, m_max, grid_points);
    const auto dist2 =
        sqz::phase_distribution_closed(sqz::SqueezeParams{2.0, 0.0}, 0.0, m_max, grid_points);

    Table t;
    t.param("subcommand", std::string("fig2a"));
    t.param("phi", 0.0);
    t.param("varphi", 0.0);
    t.param("m_max", static_cast<std::int64_t>(m_max));
    t.param("grid_points", static_cast<std::int64_t>(grid_points));
    t.columns = {"phi_grid", "density_r1", "density_r2"};
    for (std::size_t g = 0; g < dist1.grid.size(); ++g) {
        t.rows.push_back({dist1.grid[g], dist1.density[g], dist2.density[g]});
    }
    t.note("peak_r1", dist1.grid[dist1.argmax()]);
    t.note("peak_r2", dist2.grid[dist2.argmax()]);
    deliver_table(out, t);
    return 0;
}

int run_fig2b(int grid_points, const OutputOptions& out) {
    const int m_max = 200;
    std::vector<double> r_values(21);
    for (std::size_t i = 0; i < r_values.size(); ++i) r_values[i] = 0.5 + 0.1 * static_cast<double>(i);
    const auto curve = sqz::log_variance_ratio_curve(r_values, 0.0, 0.0, m_max, grid_points);

    Table t;
    t.param("subcommand", std::string("fig2b"));
    t.param("phi", 0.0);
    t.param("varphi", 0.0);
    t.param("m_max", static_cast<std::int64_t>(m_max));
    t.param("grid_points", static_cast<std::int64_t>(grid_points));
    t.columns = {"r", "log_ratio"};
    for (const auto& [r, y] : curve) t.rows.push_back({r, y});
    t.note("slope", sqz::least_squares_slope(curve));
    t.note("baseline_variance", sqz::k_uniform_half_window_variance);
    deliver_table(out, t);
    return 0;
}

// ---------------------------------------------------------------------------
// check: the invariant suite

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Direct log-space evaluation of the squeezed-vacuum amplitude magnitude,
// independent of the ratio recurrence.
double direct_coefficient_magnitude(double r, int m) {
    if (r == 0.0) return m == 0 ? 1.0 : 0.0;
    const double log_mag = 0.5 * std::log(1.0 / std::cosh(r)) +
                           0.5 * std::lgamma(2.0 * m + 1.0) - m * std::numbers::ln2 -
                           std::lgamma(m + 1.0) + m * std::log(std::tanh(r));
    return std::exp(log_mag);
}

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> results;
    auto report = [&results](const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    };
    auto fmt3 = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return std::string(buf);
    };

    {  // Normalization of truncated coefficient vectors.
        bool ok = true;
        double worst = 0.0;
        for (double r : {0.5, 1.0, 2.0}) {
            const int m_max = sqz::truncation_for_tolerance(r, 1e-10);
            const double norm =
                sqz::squeezed_vacuum_coefficients(sqz::SqueezeParams{r, 0.0}, m_max).squared_norm();
            worst = std::max(worst, std::abs(norm - 1.0));
            ok = ok && norm >= 1.0 - 1e-10 && norm <= 1.0 + 1e-9;
        }
        report("fock: truncated norm within [1 - tail, 1]", ok, "max |norm-1| " + fmt3(worst));
    }
    {  // Parity: odd amplitudes exactly zero.
        const auto state = sqz::squeezed_vacuum_coefficients(sqz::SqueezeParams{1.3, 0.9}, 60);
        bool ok = true;
        for (std::size_t k = 1; k < state.amplitudes.size(); k += 2) {
            ok = ok && state.amplitudes[k] == std::complex<double>{0.0, 0.0};
        }
        report("fock: odd amplitudes exactly zero", ok, "");
    }
    {  // Recurrence vs direct log-space evaluation.
        double worst = 0.0;
        for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
            const auto state = sqz::squeezed_vacuum_coefficients(sqz::SqueezeParams{r, 0.4}, 200);
            for (int m = 0; m <= 200; ++m) {
                const double direct = direct_coefficient_magnitude(r, m);
                const double rec = std::abs(state.amplitudes[2 * static_cast<std::size_t>(m)]);
                worst = std::max(worst, std::abs(rec - direct) / std::max(direct, 1e-300));
            }
        }
        report("fock: recurrence matches direct evaluation (rel 1e-10)", worst < 1e-10,
               "max rel " + fmt3(worst));
    }
    {  // Quadrature variance of the squeezed vacuum matches the closed form.
        // The truncated-state deviation scales like (4 m_max + 2) * tail, so a
        // 1e-13 tail keeps it well under the 1e-9 assertion.
        double worst = 0.0;
        for (double r : {0.5, 1.0}) {
            const sqz::SqueezeParams params{r, 0.7};
            const auto state =
                sqz::squeezed_vacuum_coefficients(params, sqz::truncation_for_tolerance(r, 1e-13));
            for (double theta : {0.0, 0.35, k_pi / 2, 1.9}) {
                const auto stats = sqz::quadrature_statistics(state, theta);
                const double expected = sqz::variance_bracket(params, theta) / 4.0;
                worst = std::max(worst, std::abs(stats.variance - expected));
            }
        }
        report("fock: quadrature variance matches bracket/4 (1e-9)", worst < 1e-9,
               "max dev " + fmt3(worst));
    }
    {  // Vacuum quadrature variance is exactly 1/4 at every angle.
        sqz::FockVector vacuum;
        vacuum.amplitudes = {{1.0, 0.0}};
        bool ok = true;
        for (double theta : {0.0, 0.7, k_pi, 5.1}) {
            const auto stats = sqz::quadrature_statistics(vacuum, theta);
            ok = ok && stats.variance == 0.25 && stats.mean == 0.0;
        }
        report("fock: vacuum quadrature variance exactly 1/4", ok, "");
    }
    {  // Series vs closed forms on the r grid [0, 3], m_max = 200.
        double worst = 0.0;
        double first_bad_r = -1.0;
        for (int i = 0; i <= 30; ++i) {
            const double r = 0.1 * static_cast<double>(i);
            const auto [a, b] = sqz::appendix_series_ab(r, 200);
            const auto [ac, bc] = sqz::closed_form_ab(r);
            const double dev = std::max(std::abs(a - ac), std::abs(b - bc));
            if (dev >= 1e-9 && first_bad_r < 0.0) first_bad_r = r;
            worst = std::max(worst, dev);
        }
        const bool ok = worst < 1e-9;
        std::string detail = "max dev " + fmt3(worst);
        if (!ok) detail += ", first failure at r = " + fmt_double(first_bad_r);
        report("analytic: 200-term series match closed forms on r in [0,3] (1e-9)", ok, detail);
    }
    {  // Fock route equals coherent route with beta = sqrt(N).
        const auto exact_coh =
            sqz::nbc_variance_coherent(10.0, sqz::SqueezeParams{1.0, 0.3}, 0.9).variance;
        const auto exact_fock =
            sqz::nbc_variance_fock(100, sqz::SqueezeParams{1.0, 0.3}, 0.9).variance;
        bool ok = exact_coh == exact_fock;
        double worst = 0.0;
        for (std::int64_t n : {7, 50, 137}) {
            const sqz::SqueezeParams params{0.8, 1.1};
            const double f = sqz::nbc_variance_fock(n, params, 0.4).variance;
            const double c = sqz::nbc_variance_coherent(std::sqrt(static_cast<double>(n)),
                                                        params, 0.4).variance;
            worst = std::max(worst, std::abs(f - c) / f);
        }
        ok = ok && worst < 1e-14;
        report("analytic: fock route == coherent route at beta^2 = N", ok, "max rel " + fmt3(worst));
    }
    {  // Extremes: N e^{-2r} at the minimum, N e^{+2r} at the maximum, product N^2.
        bool ok = true;
        double worst = 0.0;
        const double n = 100.0;
        for (double r : {0.5, 1.0, 2.0}) {
            const sqz::SqueezeParams params{r, 0.8};
            const double vmin = sqz::nbc_variance_fock(100, params, params.phi / 2.0).variance;
            const double vmax =
                sqz::nbc_variance_fock(100, params, (k_pi + params.phi) / 2.0).variance;
            worst = std::max(worst, std::abs(vmin - n * std::exp(-2.0 * r)) / (n * std::exp(-2.0 * r)));
            worst = std::max(worst, std::abs(vmax - n * std::exp(2.0 * r)) / (n * std::exp(2.0 * r)));
            worst = std::max(worst, std::abs(vmin * vmax - n * n) / (n * n));
        }
        ok = worst < 1e-12;
        report("analytic: variance extremes N e^{-2r}, N e^{+2r}, product N^2 (1e-12)", ok,
               "max rel " + fmt3(worst));
    }
    {  // Poisson mixture equals the fixed-N formula at N = alpha^2.
        double worst = 0.0;
        for (double r : {0.0, 1.0}) {
            const sqz::SqueezeParams params{r, 0.0};
            const double mix = sqz::poisson_mixture_variance(10.0, params, 0.6).variance;
            const double fixed = sqz::nbc_variance_fock(100, params, 0.6).variance;
            worst = std::max(worst, std::abs(mix - fixed) / fixed);
        }
        report("analytic: poisson mixture equals fixed-N formula (rel 1e-7)", worst < 1e-7,
               "max rel " + fmt3(worst));
    }
    {  // Generator structure: tridiagonal, Hermitian, zero diagonal.
        const std::int64_t n = 6;
        const auto gen = sqz::NbcGenerator::for_total(n);
        const std::size_t dim = static_cast<std::size_t>(n) + 1;
        bool ok = true;
        std::vector<std::vector<std::complex<double>>> cols(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            std::vector<std::complex<double>> unit(dim, {0.0, 0.0});
            unit[k] = {1.0, 0.0};
            cols[k] = gen.apply(unit);
        }
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < dim; ++k) {
                const auto v = cols[k][j];
                const std::size_t dist = j > k ? j - k : k - j;
                if (dist != 1 && v != std::complex<double>{0.0, 0.0}) ok = false;
                if (std::abs(v - std::conj(cols[j][k])) > 1e-14) ok = false;
            }
        }
        report("block: generator is tridiagonal, Hermitian, traceless", ok, "");
    }
    {  // Spectrum lattice {N - 2j} for every N <= 400.
        double worst = 0.0;
        for (std::int64_t n = 1; n <= 400; ++n) {
            const auto evs = sqz::nbc_eigenvalues(n);
            for (std::size_t j = 0; j < evs.size(); ++j) {
                const double expected = -static_cast<double>(n) + 2.0 * static_cast<double>(j);
                worst = std::max(worst, std::abs(evs[j] - expected));
            }
        }
        report("block: eigenvalues match {N - 2j} for N <= 400 (1e-8)", worst < 1e-8,
               "max dev " + fmt3(worst));
    }
    {  // Moments are real for arbitrary state phases.
        const std::int64_t n = 33;
        sqz::TwoModeBlock block;
        block.n_total = n;
        block.amplitudes.resize(static_cast<std::size_t>(n) + 1);
        double norm = 0.0;
        for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
            const double u = sqz::rng::unit_double(sqz::rng::draw(7, 2 * k));
            const double v = sqz::rng::unit_double(sqz::rng::draw(7, 2 * k + 1));
            block.amplitudes[k] = std::polar(u + 0.05, 2.0 * k_pi * v);
            norm += std::norm(block.amplitudes[k]);
        }
        for (auto& amp : block.amplitudes) amp /= std::sqrt(norm);
        const auto gen = sqz::NbcGenerator::for_total(n);
        const auto g_psi = gen.apply(block.amplitudes);
        std::complex<double> mean{0.0, 0.0};
        for (std::size_t k = 0; k < g_psi.size(); ++k) {
            mean += std::conj(block.amplitudes[k]) * g_psi[k];
        }
        report("block: <n_bc> real regardless of phases (1e-10)", std::abs(mean.imag()) < 1e-10,
               "imag " + fmt3(std::abs(mean.imag())));
    }
    {  // Oracle error against the closed form shrinks as N doubles.
        const sqz::SqueezeParams params{1.0, 0.0};
        const double theta = 0.0;
        const double varphi = theta - k_pi / 2.0;
        std::vector<double> errors;
        for (std::int64_t n : {100, 200, 400}) {
            const auto block = sqz::build_entangled_state(params, n, varphi, 50);
            const double oracle = sqz::nbc_moments(block).variance;
            const double predicted = sqz::nbc_variance_fock(n, params, theta).variance;
            errors.push_back(std::abs(oracle - predicted) / predicted);
        }
        const bool ok = errors[1] < errors[0] && errors[2] < errors[1];
        report("block: oracle error decreases as N doubles (100, 200, 400)", ok,
               fmt3(errors[0]) + " > " + fmt3(errors[1]) + " > " + fmt3(errors[2]));
    }
    {  // varphi shifts act exactly like theta shifts in the cosine law.
        const sqz::SqueezeParams params{0.7, 0.5};
        const std::int64_t n = 60;
        const int m_max = 25;
        const double varphi0 = 0.2;
        const double theta0 = varphi0 + k_pi / 2.0;
        auto oracle_at = [&](double delta) {
            return sqz::nbc_moments(
                       sqz::build_entangled_state(params, n, varphi0 + delta, m_max))
                .variance;
        };
        const double c0 = std::cos(2.0 * theta0 - params.phi);
        const double c1 = std::cos(2.0 * (theta0 + k_pi / 4.0) - params.phi);
        const double v0 = oracle_at(0.0);
        const double v1 = oracle_at(k_pi / 4.0);
        const double b = (v1 - v0) / (c0 - c1);
        const double a = v0 + b * c0;
        double worst = 0.0;
        for (int i = 0; i <= 8; ++i) {
            const double delta = static_cast<double>(i) * k_pi / 8.0;
            const double expected = a - b * std::cos(2.0 * (theta0 + delta) - params.phi);
            worst = std::max(worst, std::abs(oracle_at(delta) - expected));
        }
        report("block: varphi equivariance follows the cosine law (1e-9 N)",
               worst < 1e-9 * static_cast<double>(n), "max dev " + fmt3(worst));
    }
    {  // Monte Carlo agrees with exact moments at the statistical rate.
        const sqz::SqueezeParams params{0.8, 0.0};
        const auto block = sqz::build_entangled_state(params, 120, 0.3, 40);
        const auto state = sqz::TwoModeState::from_block(block);
        const auto exact = sqz::nbc_moments(state);
        bool ok = true;
        std::string detail;
        for (std::size_t n_samples : {10000UL, 100000UL}) {
            const auto values = sqz::sample_nbc(state, n_samples, 20240917);
            double mean = 0.0;
            for (auto v : values) mean += static_cast<double>(v);
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (auto v : values) {
                const double d = static_cast<double>(v) - mean;
                var += d * d;
            }
            var /= static_cast<double>(values.size() - 1);
            const double n = static_cast<double>(n_samples);
            const double mean_tol = 5.0 * std::sqrt(exact.variance / n);
            const double var_tol = 5.0 * exact.variance * std::sqrt(2.0 / n);
            ok = ok && std::abs(mean - exact.mean) <= mean_tol &&
                 std::abs(var - exact.variance) <= var_tol;
            detail += (detail.empty() ? "" : "; ") + std::to_string(n_samples) + ": dvar " +
                      fmt3(std::abs(var - exact.variance));
        }
        report("block: Monte Carlo within 5 sigma of exact moments (1e4, 1e5)", ok, detail);
    }
    {  // Phase normalization: integral equals truncated norm, both routes.
        const sqz::SqueezeParams params{1.0, 0.0};
        const int m_max = 50;
        const auto fock = sqz::squeezed_vacuum_coefficients(params, m_max);
        const double norm = fock.squared_norm();
        const auto closed = sqz::phase_distribution_closed(params, 0.3, m_max, 4096);
        const auto block = sqz::build_entangled_state(params, 200, 0.3, m_max);
        const auto general = sqz::phase_distribution_general(block, 4096);
        const double dev = std::max(std::abs(closed.integral() - norm),
                                    std::abs(general.integral() - norm));
        report("phase: integral equals truncated norm, both routes (1e-10)", dev < 1e-10,
               "max dev " + fmt3(dev));
    }
    {  // Route equivalence, pointwise.
        const sqz::SqueezeParams params{1.0, 0.0};
        const int m_max = 50;
        const auto closed = sqz::phase_distribution_closed(params, 0.3, m_max, 4096);
        const auto general = sqz::phase_distribution_general(
            sqz::build_entangled_state(params, 200, 0.3, m_max), 4096);
        double worst = 0.0;
        for (std::size_t g = 0; g < closed.density.size(); ++g) {
            worst = std::max(worst, std::abs(closed.density[g] - general.density[g]));
        }
        report("phase: closed and general routes agree pointwise (1e-10)", worst < 1e-10,
               "max dev " + fmt3(worst));
    }
    {  // Translation covariance: varphi -> varphi + delta shifts by -delta.
        const sqz::SqueezeParams params{1.0, 0.4};
        const int shift_steps = 16;
        const auto base = sqz::phase_distribution_closed(params, 0.0, 40, 1024);
        const double delta = static_cast<double>(shift_steps) * base.grid_step();
        const auto shifted = sqz::phase_distribution_closed(params, delta, 40, 1024);
        double worst = 0.0;
        for (std::size_t g = 0; g < base.density.size(); ++g) {
            const std::size_t moved = (g + static_cast<std::size_t>(shift_steps)) % base.density.size();
            worst = std::max(worst, std::abs(shifted.density[g] - base.density[moved]));
        }
        report("phase: varphi shift translates the grid (1e-12)", worst < 1e-12,
               "max dev " + fmt3(worst));
    }
    {  // pi-periodicity of the squeezed-vacuum distribution.
        const auto dist =
            sqz::phase_distribution_closed(sqz::SqueezeParams{1.2, 0.0}, 0.0, 60, 1024);
        double worst = 0.0;
        const std::size_t half = dist.density.size() / 2;
        for (std::size_t g = 0; g < dist.density.size(); ++g) {
            worst = std::max(worst,
                             std::abs(dist.density[g] - dist.density[(g + half) % dist.density.size()]));
        }
        report("phase: distribution is pi-periodic (1e-12)", worst < 1e-12, "max dev " + fmt3(worst));
    }
    {  // N-independence of the general route.
        const sqz::SqueezeParams params{1.0, 0.0};
        const int m_max = 50;
        const auto reference = sqz::phase_distribution_general(
            sqz::build_entangled_state(params, 200, 0.3, m_max), 4096);
        double worst = 0.0;
        for (std::int64_t n : {100, 400}) {
            const auto other = sqz::phase_distribution_general(
                sqz::build_entangled_state(params, n, 0.3, m_max), 4096);
            for (std::size_t g = 0; g < reference.density.size(); ++g) {
                worst = std::max(worst, std::abs(reference.density[g] - other.density[g]));
            }
        }
        report("phase: general route independent of N in {100, 200, 400} (1e-10)", worst < 1e-10,
               "max dev " + fmt3(worst));
    }
    {  // Window variance strictly decreasing in r.
        bool ok = true;
        double prev = 0.0;
        for (int i = 1; i <= 12; ++i) {
            const double r = 0.25 * static_cast<double>(i);
            const auto dist =
                sqz::phase_distribution_closed(sqz::SqueezeParams{r, 0.0}, 0.0, 200, 4096);
            const double var = sqz::restricted_window_stats(dist, 0.0, k_pi).variance;
            if (i > 1 && var >= prev) ok = false;
            prev = var;
        }
        report("phase: [0, pi] window variance strictly decreasing in r", ok, "");
    }
    {  // Uniform baseline: r -> 0 gives mean pi/2 and variance pi^2/12.
        const auto dist =
            sqz::phase_distribution_closed(sqz::SqueezeParams{0.0, 0.0}, 0.0, 0, 1 << 18);
        const auto stats = sqz::restricted_window_stats(dist, 0.0, k_pi);
        const double mean_dev = std::abs(stats.mean - k_pi / 2.0);
        const double var_dev = std::abs(stats.variance - sqz::k_uniform_half_window_variance);
        report("phase: uniform window baseline pi/2, pi^2/12 (1e-9)",
               mean_dev < 1e-9 && var_dev < 1e-9,
               "mean dev " + fmt3(mean_dev) + ", var dev " + fmt3(var_dev));
    }
    return results;
}

int run_check(const OutputOptions& out) {
    const auto results = run_invariant_suite();
    std::ostringstream os;
    int failures = 0;
    for (const auto& r : results) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) os << " (" << r.detail << ")";
        os << "\n";
        if (!r.pass) ++failures;
    }
    os << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
       << " (" << results.size() << " total)\n";
    deliver(out, os.str());
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homodyne statistics of squeezed-vacuum light by independent routes"};
    app.require_subcommand(1);

    OutputOptions out;

    // coeffs
    double co_r = 0.0, co_phi = 0.0;
    std::optional<int> co_m_max;
    auto* coeffs = app.add_subcommand("coeffs", "Squeezed-vacuum pair amplitudes C_m");
    coeffs->add_option("--r", co_r, "Squeeze magnitude r")->required();
    coeffs->add_option("--phi", co_phi, "Squeeze phase phi (radians)");
    coeffs->add_option("--m-max", co_m_max, "Largest pair index (default: tail below 1e-12)");
    add_output_options(coeffs, out);

    // variance
    VarianceArgs va;
    auto* variance = app.add_subcommand("variance", "Analytic n_bc variance by route");
    variance->add_option("--r", va.r, "Squeeze magnitude r")->required();
    variance->add_option("--phi", va.phi, "Squeeze phase phi (radians)");
    variance->add_option("--beta", va.beta, "Coherent LO amplitude beta");
    variance->add_option("--n-total", va.n_total, "Total photon number N");
    variance->add_option("--alpha", va.alpha, "Poisson-mixture amplitude alpha");
    variance->add_option("--points", va.points, "Theta sweep points over [0, pi)")
        ->capture_default_str();
    add_angle_options(variance, va.angle);
    add_output_options(variance, out);

    // oracle
    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Exact block moments next to the analytic route");
    oracle->add_option("--r", oa.r, "Squeeze magnitude r")->required();
    oracle->add_option("--phi", oa.phi, "Squeeze phase phi (radians)");
    oracle->add_option("--n-total", oa.n_total, "Total photon number N (fixed-N entangled state)");
    oracle->add_option("--beta", oa.beta, "Coherent LO amplitude (product-state oracle)");
    oracle->add_option("--m-max", oa.m_max, "Largest pair index");
    oracle->add_option("--cutoff-lo", oa.cutoff_lo, "LO Fock cutoff (default beta^2 + 10 beta + 10)");
    oracle->add_option("--points", oa.points, "Theta sweep points over [0, pi)")
        ->capture_default_str();
    add_angle_options(oracle, oa.angle);
    add_output_options(oracle, out);

    // sample
    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Monte Carlo records of n_bc outcomes");
    sample->add_option("--r", sa.r, "Squeeze magnitude r")->required();
    sample->add_option("--phi", sa.phi, "Squeeze phase phi (radians)");
    sample->add_option("--n-total", sa.n_total, "Total photon number N (fixed-N entangled state)");
    sample->add_option("--beta", sa.beta, "Coherent LO amplitude (product-state oracle)");
    sample->add_option("--m-max", sa.m_max, "Largest pair index");
    sample->add_option("--cutoff-lo", sa.cutoff_lo, "LO Fock cutoff");
    sample->add_option("--samples", sa.samples, "Number of samples")->capture_default_str();
    sample->add_option("--seed", sa.seed, "RNG seed")->capture_default_str();
    add_angle_options(sample, sa.angle);
    add_output_options(sample, out);

    // phase
    PhaseArgs pa;
    auto* phase = app.add_subcommand("phase", "Relative-phase distribution P(Phi)");
    phase->add_option("--r", pa.r, "Squeeze magnitude r")->required();
    phase->add_option("--phi", pa.phi, "Squeeze phase phi (radians)");
    phase->add_option("--varphi", pa.varphi, "Local-oscillator phase (radians)");
    phase->add_option("--m-max", pa.m_max, "Largest pair index")->capture_default_str();
    phase->add_option("--grid-points", pa.grid_points, "Grid points over [0, 2 pi)")
        ->capture_default_str();
    phase->add_option("--route", pa.route, "closed, general, or both")
        ->check(CLI::IsMember({"closed", "general", "both"}))
        ->capture_default_str();
    phase->add_option("--n-total", pa.n_total, "Block size for the general route (default 2 m_max)");
    add_output_options(phase, out);

    // fig2a / fig2b
    int fig2a_grid = 4096;
    auto* fig2a = app.add_subcommand("fig2a", "P(Phi) for r = 1 and r = 2 (phi = varphi = 0)");
    fig2a->add_option("--grid-points", fig2a_grid, "Grid points")->capture_default_str();
    add_output_options(fig2a, out);

    int fig2b_grid = 4096;
    auto* fig2b = app.add_subcommand("fig2b", "Window-variance ratio curve and fitted slope");
    fig2b->add_option("--grid-points", fig2b_grid, "Grid points")->capture_default_str();
    add_output_options(fig2b, out);

    // check
    auto* check = app.add_subcommand("check", "Run the invariant suite; exit 3 on failure");
    add_output_options(check, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (coeffs->parsed()) return run_coeffs(co_r, co_phi, co_m_max, out);
        if (variance->parsed()) return run_variance(va, out);
        if (oracle->parsed()) return run_oracle(oa, out);
        if (sample->parsed()) return run_sample(sa, out);
        if (phase->parsed()) return run_phase(pa, out);
        if (fig2a->parsed()) return run_fig2a(fig2a_grid, out);
        if (fig2b->parsed()) return run_fig2b(fig2b_grid, out);
        if (check->parsed()) return run_check(out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
