#include <doctest.h>

#include <cmath>

#include "marketstates/corr.hpp"
#include "marketstates/synth.hpp"
#include "oracles.hpp"

using namespace marketstates;
using namespace marketstates::synth;

TEST_CASE("symmetric_sqrt squares back to the input") {
    for (double c : {0.0, 0.3, 0.9}) {
        const auto target = uniform_correlation(6, c);
        const auto root = symmetric_sqrt(target);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                double acc = 0.0;
                for (std::size_t l = 0; l < 6; ++l) acc += root(i, l) * root(l, j);
                CHECK(acc == doctest::Approx(target(i, j)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("symmetric_sqrt rejects non-PSD input") {
    // Uniform c below -1/(K-1) has a negative eigenvalue 1 + (K-1)c.
    const auto bad = uniform_correlation(5, -0.5);
    CHECK_THROWS_WITH_AS(symmetric_sqrt(bad), doctest::Contains("positive semidefinite"),
                         Error);
}

TEST_CASE("symmetric_eigenvalues agrees with the dense oracle") {
    const auto w = oracle::random_correlation(7, 25, 555);
    const auto ours = symmetric_eigenvalues(w.values);
    const auto ref = oracle::eigenvalues(w.values);
    REQUIRE(ours.size() == ref.size());
    for (std::size_t i = 0; i < ours.size(); ++i) {
        CHECK(ours[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
}

TEST_CASE("generate_regime_panel: independence at c = 0") {
    RegimeSpec spec;
    spec.series_count = 6;
    spec.seed = 31;
    spec.segments = {{400, 0.0, {}, 0.0}};
    const auto generated = generate_regime_panel(spec);
    const auto w = corr::pearson_matrix(generated.panel, {0, 400});
    double mean_offdiag = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            mean_offdiag += w.values(i, j);
            ++n;
        }
    }
    mean_offdiag /= n;
    CHECK(std::abs(mean_offdiag) < 3.0 / std::sqrt(400.0));
}

TEST_CASE("generate_regime_panel: sample correlation approaches the target") {
    RegimeSpec spec;
    spec.series_count = 10;
    spec.seed = 57;
    spec.segments = {{500, 0.9, {}, 0.0}};
    const auto generated = generate_regime_panel(spec);
    const auto w = corr::pearson_matrix(generated.panel, {0, 500});
    double mean_offdiag = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = i + 1; j < 10; ++j) {
            mean_offdiag += w.values(i, j);
            ++n;
        }
    }
    mean_offdiag /= n;
    CHECK(std::abs(mean_offdiag - 0.9) < 0.05);
}

TEST_CASE("generate_regime_panel: identical seeds give bit-identical panels") {
    RegimeSpec spec;
    spec.series_count = 5;
    spec.seed = 77;
    spec.segments = {{50, 0.4, {}, 0.1}, {50, -0.1, {}, 0.0}};
    const auto a = generate_regime_panel(spec);
    const auto b = generate_regime_panel(spec);
    CHECK(a.panel.values == b.panel.values);
    CHECK(a.segment_labels == b.segment_labels);
    spec.seed = 78;
    const auto c = generate_regime_panel(spec);
    CHECK_FALSE(a.panel.values == c.panel.values);
}

TEST_CASE("generate_regime_panel: labels mark segment boundaries") {
    RegimeSpec spec;
    spec.series_count = 4;
    spec.seed = 9;
    spec.segments = {{10, 0.1, {}, 0.0}, {15, 0.7, {}, 0.0}};
    const auto generated = generate_regime_panel(spec);
    CHECK(generated.panel.sample_count() == 25);
    CHECK(generated.segment_labels[9] == 0);
    CHECK(generated.segment_labels[10] == 1);
    CHECK(generated.segment_labels.back() == 1);
}

TEST_CASE("generate_regime_panel: validation") {
    RegimeSpec spec;
    spec.series_count = 4;
    spec.segments = {{10, -0.9, {}, 0.0}};  // non-PSD uniform target
    CHECK_THROWS_AS(generate_regime_panel(spec), Error);
    spec.segments = {{1, 0.1, {}, 0.0}};
    CHECK_THROWS_AS(generate_regime_panel(spec), Error);  // segment too short
    spec.segments.clear();
    CHECK_THROWS_AS(generate_regime_panel(spec), Error);
}

TEST_CASE("student-t innovations keep the correlation target and fatten tails") {
    RegimeSpec spec;
    spec.series_count = 6;
    spec.seed = 2001;
    spec.innovations = Innovations::StudentT;
    spec.student_t_dof = 3;
    spec.segments = {{2000, 0.5, {}, 0.0}};
    const auto generated = generate_regime_panel(spec);
    const auto w = corr::pearson_matrix(generated.panel, {0, 2000});
    double mean_offdiag = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            mean_offdiag += w.values(i, j);
            ++n;
        }
    }
    CHECK(std::abs(mean_offdiag / n - 0.5) < 0.1);
    std::vector<double> first_row(generated.panel.values.data(),
                                  generated.panel.values.data() + 2000);
    CHECK(oracle::excess_kurtosis(first_row) > 1.0);
}

TEST_CASE("integrate_prices reproduces the panel returns through ingest") {
    RegimeSpec spec;
    spec.series_count = 4;
    spec.seed = 88;
    spec.segments = {{60, 0.3, {}, 0.0}};
    const auto generated = generate_regime_panel(spec);
    const auto prices = integrate_prices(generated.panel);
    REQUIRE(prices.size() == 4);
    REQUIRE(prices[0].prices.size() == 61);

    ingest::ReturnConfig daily;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const auto r = ingest::compute_returns(prices[i], daily);
        REQUIRE(r.values.size() == 60);
        for (std::size_t t = 0; t < 60; ++t) {
            CHECK(r.values[t] ==
                  doctest::Approx(generated.panel.values(i, t)).epsilon(1e-12));
            CHECK(r.timestamps[t] == generated.panel.timestamps[t]);
        }
    }
}

TEST_CASE("regime spec JSON round-trip") {
    const nlohmann::json j = {
        {"K", 12},
        {"seed", 5},
        {"volatility", 0.02},
        {"segments",
         {{{"length", 30}, {"c", 0.2}}, {{"length", 40}, {"c", 0.8}, {"noise", 0.5}}}}};
    const auto spec = RegimeSpec::from_json(j);
    CHECK(spec.series_count == 12);
    CHECK(spec.seed == 5);
    CHECK(spec.segments.size() == 2);
    CHECK(spec.segments[1].noise == 0.5);
    const auto j2 = spec.to_json();
    CHECK(j2["K"] == 12);
    CHECK(j2["segments"][0]["c"] == 0.2);
    CHECK_THROWS_AS(RegimeSpec::from_json(nlohmann::json{{"seed", 1}}), Error);
}
