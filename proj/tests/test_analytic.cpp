#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqz/analytic.hpp"

using sqz::SqueezeParams;
constexpr double k_pi = std::numbers::pi;

TEST_CASE("route names") {
    CHECK(sqz::route_name(sqz::Route::coherent_analytic) == "coherent-analytic");
    CHECK(sqz::route_name(sqz::Route::fock_analytic) == "fock-analytic");
    CHECK(sqz::route_name(sqz::Route::oracle) == "oracle");
    CHECK(sqz::route_name(sqz::Route::monte_carlo) == "monte-carlo");
    CHECK(sqz::route_name(sqz::Route::poisson_mixture) == "poisson-mixture");
}

TEST_CASE("homodyne settings derive theta from the LO phase") {
    const auto s = sqz::HomodyneSettings::coherent(4.0, 0.3);
    CHECK(s.theta() == 0.3 + k_pi / 2.0);
    CHECK(s.is_coherent());
    CHECK(s.beta() == 4.0);
    const auto f = sqz::HomodyneSettings::fock(100, -0.2);
    CHECK_FALSE(f.is_coherent());
    CHECK(f.n_total() == 100);
    CHECK(sqz::HomodyneSettings::lo_phase_for_theta(f.theta()) == doctest::Approx(-0.2));
    CHECK_THROWS_AS(sqz::HomodyneSettings::coherent(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sqz::HomodyneSettings::fock(-5, 0.0), std::invalid_argument);
}

TEST_CASE("shot noise: no squeezing gives beta^2 and N exactly") {
    for (double theta : {0.0, 0.7, 2.9}) {
        CHECK(sqz::nbc_variance_coherent(10.0, SqueezeParams{0.0, 0.0}, theta).variance == 100.0);
        CHECK(sqz::nbc_variance_fock(100, SqueezeParams{0.0, 0.0}, theta).variance == 100.0);
    }
}

TEST_CASE("coherent-route variance at the printed working points") {
    const SqueezeParams params{1.0, 0.0};
    const auto quiet = sqz::nbc_variance_coherent(10.0, params, 0.0);
    CHECK(quiet.mean == 0.0);
    CHECK(quiet.variance == doctest::Approx(13.533528323661269).epsilon(1e-12));
    const auto loud = sqz::nbc_variance_coherent(10.0, params, k_pi / 2.0);
    CHECK(loud.variance == doctest::Approx(738.90560989306502).epsilon(1e-12));
    CHECK(quiet.route == sqz::Route::coherent_analytic);
}

TEST_CASE("fock-route variance at the printed working points") {
    const SqueezeParams params{1.0, 0.0};
    CHECK(sqz::nbc_variance_fock(100, params, 0.0).variance ==
          doctest::Approx(13.533528323661269).epsilon(1e-12));
    // At 2 theta - phi = pi/2 the cosine term drops out: N (cosh^2 + sinh^2).
    CHECK(sqz::nbc_variance_fock(100, params, k_pi / 4.0).variance ==
          doctest::Approx(376.21956910836315).epsilon(1e-12));
    CHECK(sqz::nbc_variance_fock(100, params, 0.0).route == sqz::Route::fock_analytic);
}

TEST_CASE("both routes share one bracket: equal whenever beta^2 is N") {
    const SqueezeParams params{1.2, 0.5};
    for (double theta : {0.0, 0.4, 1.9}) {
        CHECK(sqz::nbc_variance_coherent(10.0, params, theta).variance ==
              sqz::nbc_variance_fock(100, params, theta).variance);
    }
    for (std::int64_t n : {2, 3, 7, 50, 137, 9999}) {
        const double f = sqz::nbc_variance_fock(n, params, 0.8).variance;
        const double c =
            sqz::nbc_variance_coherent(std::sqrt(static_cast<double>(n)), params, 0.8).variance;
        CHECK(f == doctest::Approx(c).epsilon(1e-14));
    }
}

TEST_CASE("variance extremes: N e^{-2r}, N e^{+2r}, product N^2") {
    const double n = 100.0;
    for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        for (double phi : {0.0, 0.8}) {
            const SqueezeParams params{r, phi};
            const double vmin = sqz::nbc_variance_fock(100, params, phi / 2.0).variance;
            const double vmax = sqz::nbc_variance_fock(100, params, (k_pi + phi) / 2.0).variance;
            CHECK(vmin == doctest::Approx(n * std::exp(-2.0 * r)).epsilon(1e-12));
            CHECK(vmax == doctest::Approx(n * std::exp(2.0 * r)).epsilon(1e-12));
            CHECK(vmin * vmax == doctest::Approx(n * n).epsilon(1e-12));
            CHECK(vmin <= sqz::nbc_variance_fock(100, params, 0.77).variance);
            CHECK(vmax >= sqz::nbc_variance_fock(100, params, 0.77).variance);
        }
    }
}

TEST_CASE("stable bracket equals the printed hyperbolic form") {
    for (double r : {0.0, 0.3, 1.0, 2.0, 3.0}) {
        for (double phi : {0.0, 1.3}) {
            const SqueezeParams params{r, phi};
            for (double theta : {0.0, 0.2, 0.9, 1.6, 2.8}) {
                const double printed =
                    std::cosh(r) * std::cosh(r) + std::sinh(r) * std::sinh(r) -
                    2.0 * std::sinh(r) * std::cosh(r) * std::cos(2.0 * theta - phi);
                const double stable = sqz::variance_bracket(params, theta);
                CHECK(std::abs(stable - printed) <= 1e-12 * std::cosh(2.0 * r));
            }
        }
    }
}

TEST_CASE("appendix series: r = 0 keeps only the first term") {
    const auto [a, b] = sqz::appendix_series_ab(0.0, 50);
    CHECK(a == 1.0);
    CHECK(b == 0.0);
}

TEST_CASE("appendix series at r = 1, m_max = 200 reach the closed forms") {
    const auto [a, b] = sqz::appendix_series_ab(1.0, 200);
    CHECK(a == doctest::Approx(3.7621956910836315).epsilon(1e-9));
    CHECK(b == doctest::Approx(3.6268604078470188).epsilon(1e-9));

    const auto [a199, b199] = sqz::appendix_series_ab(1.0, 199);
    CHECK(std::abs(a - a199) < 1e-10);
    CHECK(std::abs(b - b199) < 1e-10);
}

TEST_CASE("appendix series converge for large r given enough terms") {
    // At r = 3 the term ratio is tanh^2(3) ~ 0.990: 200 terms are far short
    // (the gap is ~53), ~3000 close the sum below 1e-9.
    const auto [ac, bc] = sqz::closed_form_ab(3.0);
    const auto [a200, b200] = sqz::appendix_series_ab(3.0, 200);
    CHECK(std::abs(a200 - ac) > 1.0);
    const auto [a3k, b3k] = sqz::appendix_series_ab(3.0, 3000);
    CHECK(std::abs(a3k - ac) < 1e-9);
    CHECK(std::abs(b3k - bc) < 1e-9);
    CHECK_THROWS_AS(sqz::appendix_series_ab(1.0, -1), std::invalid_argument);
}

TEST_CASE("closed forms and hyperbolic identities") {
    const auto [a0, b0] = sqz::closed_form_ab(0.0);
    CHECK(a0 == 1.0);
    CHECK(b0 == 0.0);
    const auto [a1, b1] = sqz::closed_form_ab(1.0);
    CHECK(a1 == doctest::Approx(3.7621956910836315).epsilon(1e-14));
    CHECK(b1 == doctest::Approx(3.6268604078470188).epsilon(1e-14));
    for (int i = 0; i <= 30; ++i) {
        const double r = 0.1 * static_cast<double>(i);
        const auto [a, b] = sqz::closed_form_ab(r);
        CHECK(std::abs((a - b) - std::exp(-2.0 * r)) < 1e-12);
        CHECK(a + b == doctest::Approx(std::exp(2.0 * r)).epsilon(1e-12));
    }
}

TEST_CASE("poisson mixture collapses onto the fixed-N formula") {
    for (double r : {0.0, 1.0}) {
        const SqueezeParams params{r, 0.0};
        for (double theta : {0.0, 0.6, k_pi / 2.0}) {
            const auto mix = sqz::poisson_mixture_variance(10.0, params, theta);
            const auto fixed = sqz::nbc_variance_fock(100, params, theta);
            CHECK(mix.mean == 0.0);
            CHECK(mix.route == sqz::Route::poisson_mixture);
            CHECK(mix.variance == doctest::Approx(fixed.variance).epsilon(1e-7));
        }
    }
}

TEST_CASE("poisson mixture rejects degenerate input") {
    const SqueezeParams params{1.0, 0.0};
    CHECK_THROWS_AS(sqz::poisson_mixture_variance(0.0, params, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sqz::poisson_mixture_variance(-2.0, params, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sqz::poisson_mixture_variance(10.0, params, 0.0, -1.0), std::invalid_argument);
    // alpha^2 = 0.25: the +-8 sigma window misses more than 1e-9 of the mass.
    CHECK_THROWS_AS(sqz::poisson_mixture_variance(0.5, params, 0.0), std::invalid_argument);
}

TEST_CASE("poisson relative spread is 1/alpha") {
    CHECK(sqz::poisson_relative_spread(10.0) == 0.1);
    CHECK_THROWS_AS(sqz::poisson_relative_spread(0.0), std::invalid_argument);
}
