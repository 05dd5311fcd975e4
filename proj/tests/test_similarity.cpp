#include <doctest.h>

#include <cmath>

#include "marketstates/similarity.hpp"
#include "marketstates/synth.hpp"
#include "oracles.hpp"

using namespace marketstates;
using namespace marketstates::similarity;

namespace {

corr::CorrelationWindow window_of(Matrix values, int label_day = 0) {
    corr::CorrelationWindow w;
    const std::size_t k = values.rows();
    w.values = std::move(values);
    for (std::size_t i = 0; i < k; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "S%02zu", i);
        w.symbols.push_back(buf);
    }
    w.window_start = Timestamp(static_cast<std::int64_t>(label_day) * 86400);
    w.window_end = w.window_start;
    w.label_date = w.window_start;
    w.sample_count = k;
    return w;
}

corr::CorrelationWindow uniform_window(std::size_t k, double c, int label_day = 0) {
    return window_of(synth::uniform_correlation(k, c), label_day);
}

}  // namespace

TEST_CASE("zeta: identical matrices, closed forms, universe checks") {
    const auto c = oracle::random_correlation(6, 40, 5);
    CHECK(zeta(c, c) == 0.0);

    // K=2, identity vs all-ones: (0 + 1 + 1 + 0) / 4.
    const auto id2 = window_of(Matrix::identity(2));
    const auto ones2 = uniform_window(2, 1.0);
    CHECK(zeta(id2, ones2) == doctest::Approx(0.5).epsilon(1e-15));

    // K=3, uniform 0.2 vs 0.6: 6 * 0.4 / 9.
    CHECK(std::abs(zeta(uniform_window(3, 0.2), uniform_window(3, 0.6)) - 0.4 * 6.0 / 9.0) <=
          1e-12);

    auto other = oracle::random_correlation(6, 40, 6);
    other.symbols[0] = "QQQ";
    CHECK_THROWS_WITH_AS(zeta(c, other), doctest::Contains("incompatible"), Error);
}

TEST_CASE("zeta is a metric on random correlation triples") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto a = oracle::random_correlation(10, 15, 3 * seed + 1);
        const auto b = oracle::random_correlation(10, 15, 3 * seed + 2);
        const auto c = oracle::random_correlation(10, 15, 3 * seed + 3);
        const double ab = zeta(a, b), ba = zeta(b, a);
        const double bc = zeta(b, c), ac = zeta(a, c);
        CHECK(ab == ba);
        CHECK(zeta(a, a) == 0.0);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab >= 0.0);
        CHECK(ab <= 2.0);
    }
}

TEST_CASE("power_lambda_max: analytic spectra") {
    SUBCASE("identity matrix") {
        const auto s = power_lambda_max(Matrix::identity(4));
        CHECK(s.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.residual <= 1e-10);
    }
    SUBCASE("uniform off-diagonal: lambda_max = 1 + (K-1)c") {
        const auto s = power_lambda_max(synth::uniform_correlation(5, 0.5));
        CHECK(std::abs(s.lambda_max - 3.0) <= 1e-10);
        const auto s2 = power_lambda_max(synth::uniform_correlation(10, 0.2));
        CHECK(std::abs(s2.lambda_max - 2.8) <= 1e-10);
    }
    SUBCASE("random correlation matrices match the dense oracle") {
        for (std::uint64_t seed = 60; seed < 70; ++seed) {
            const auto w = oracle::random_correlation(8, 25, seed);
            const auto s = power_lambda_max(w.values, 1e-12, 100000);
            CHECK(std::abs(s.lambda_max - oracle::lambda_max(w.values)) <= 1e-9);
            CHECK(s.lambda_max >= 1.0);  // trace K spread over K eigenvalues
        }
    }
    SUBCASE("iteration cap raises a non-convergence error carrying the best estimate") {
        const auto w = oracle::random_correlation(12, 30, 999);
        try {
            power_lambda_max(w.values, 1e-14, 1);
            FAIL("expected NonConvergenceError");
        } catch (const NonConvergenceError& e) {
            CHECK(e.best().iterations == 1);
            CHECK(e.best().residual > 1e-14);
            CHECK(std::abs(e.best().lambda_max - oracle::lambda_max(w.values)) < 1.0);
        }
    }
}

TEST_CASE("zeta_alt: eigenvalue distances") {
    const auto a = uniform_window(10, 0.2);
    const auto b = uniform_window(10, 0.5, 1);
    CHECK(zeta_alt(a, a) == 0.0);
    // |(1 + 9*0.2) - (1 + 9*0.5)| = 2.7
    CHECK(std::abs(zeta_alt(a, b) - 2.7) <= 1e-9);

    SUBCASE("random pairs match the dense oracle") {
        for (std::uint64_t seed = 200; seed < 210; ++seed) {
            const auto x = oracle::random_correlation(9, 30, seed);
            const auto y = oracle::random_correlation(9, 30, seed + 1000);
            const double expected =
                std::abs(oracle::lambda_max(x.values) - oracle::lambda_max(y.values));
            CHECK(std::abs(zeta_alt(x, y) - expected) <= 1e-9);
        }
    }
    SUBCASE("bounded by K^2 times zeta") {
        for (std::uint64_t seed = 300; seed < 310; ++seed) {
            const auto x = oracle::random_correlation(7, 20, seed);
            const auto y = oracle::random_correlation(7, 20, seed + 1000);
            CHECK(zeta_alt(x, y) <= 49.0 * zeta(x, y) + 1e-12);
        }
    }
}

TEST_CASE("zeta and zeta_alt order uniform matrices the same way") {
    // Closed forms: zeta = |c1-c2| (K^2-K)/K^2, zeta_alt = (K-1)|c1-c2|.
    const std::size_t k = 6;
    const double base = 0.1;
    double prev_zeta = -1.0, prev_alt = -1.0;
    for (double c2 : {0.2, 0.35, 0.5, 0.8}) {
        const auto a = uniform_window(k, base);
        const auto b = uniform_window(k, c2, 1);
        const double z = zeta(a, b);
        const double za = zeta_alt(a, b);
        CHECK(std::abs(z - (c2 - base) * 30.0 / 36.0) <= 1e-12);
        CHECK(std::abs(za - 5.0 * (c2 - base)) <= 1e-9);
        CHECK(z > prev_zeta);
        CHECK(za > prev_alt);
        prev_zeta = z;
        prev_alt = za;
    }
}

TEST_CASE("similarity_matrix: structure and planted regimes") {
    SUBCASE("two identical windows give the zero matrix") {
        const auto w = oracle::random_correlation(5, 30, 8);
        auto w2 = w;
        w2.label_date = Timestamp(86400);
        const auto sim = similarity_matrix({w, w2}, Measure::Zeta);
        sim.validate();
        CHECK(sim.values == Matrix(2, 2, 0.0));
    }
    SUBCASE("equal pair shows up as a zero cell") {
        const auto a = uniform_window(4, 0.1, 0);
        auto b = a;
        b.label_date = Timestamp(86400);
        const auto c = uniform_window(4, 0.7, 2);
        const auto sim = similarity_matrix({a, b, c}, Measure::Zeta);
        CHECK(sim.values(0, 1) == 0.0);
        CHECK(sim.values(0, 2) > 0.0);
        CHECK(sim.values(1, 2) == sim.values(2, 1));
    }
    SUBCASE("planted two-regime run: within-regime distances stay below cross-regime") {
        synth::RegimeSpec spec;
        spec.series_count = 10;
        spec.seed = 4242;
        spec.segments = {{120, 0.15, {}, 0.0}, {120, 0.75, {}, 0.0}};
        const auto generated = synth::generate_regime_panel(spec);
        const auto windows =
            corr::window_matrices(generated.panel, corr::WindowSpec::disjoint(40));
        REQUIRE(windows.size() == 6);
        const auto sim = similarity_matrix(windows, Measure::Zeta);
        double within = 0.0, cross = 0.0;
        int nw = 0, nc = 0;
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = i + 1; j < 6; ++j) {
                const bool same = (i < 3) == (j < 3);
                (same ? within : cross) += sim.values(i, j);
                (same ? nw : nc) += 1;
            }
        }
        within /= nw;
        cross /= nc;
        CHECK(within < cross);
    }
    SUBCASE("zeta_alt matrices agree with pairwise calls") {
        std::vector<corr::CorrelationWindow> windows;
        for (int i = 0; i < 4; ++i) {
            windows.push_back(oracle::random_correlation(6, 30, 500 + i));
            windows.back().label_date = Timestamp(i * 86400);
        }
        const auto sim = similarity_matrix(windows, Measure::ZetaAlt);
        sim.validate();
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i == j) continue;
                CHECK(std::abs(sim.values(i, j) - zeta_alt(windows[i], windows[j])) <= 1e-12);
            }
        }
    }
    SUBCASE("fewer than two windows is an error") {
        std::vector<corr::CorrelationWindow> one = {oracle::random_correlation(4, 20, 1)};
        CHECK_THROWS_AS(similarity_matrix(one, Measure::Zeta), Error);
    }
}

TEST_CASE("measure names parse both ways") {
    CHECK(parse_measure("zeta") == Measure::Zeta);
    CHECK(parse_measure("zeta_alt") == Measure::ZetaAlt);
    CHECK(to_string(Measure::Zeta) == "zeta");
    CHECK_THROWS_AS(parse_measure("frobenius"), Error);
}
