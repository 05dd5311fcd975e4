#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "marketstates/similarity.hpp"
#include "marketstates/states.hpp"
#include "marketstates/synth.hpp"
#include "oracles.hpp"

using namespace marketstates;
using namespace marketstates::states;

namespace {

corr::CorrelationWindow window_with_symbols(Matrix values,
                                            std::vector<std::string> symbols) {
    corr::CorrelationWindow w;
    w.values = std::move(values);
    w.symbols = std::move(symbols);
    w.sample_count = w.symbols.size();
    return w;
}

corr::CorrelationWindow uniform_window(std::size_t k, double c) {
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < k; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "S%02zu", i);
        symbols.push_back(buf);
    }
    return window_with_symbols(synth::uniform_correlation(k, c), std::move(symbols));
}

SectorMap map_of(std::initializer_list<std::pair<const char*, const char*>> pairs) {
    SectorMap map;
    for (const auto& [symbol, code] : pairs) map.insert(symbol, code);
    return map;
}

}  // namespace

TEST_CASE("sector map validates codes and duplicates") {
    SectorMap map;
    map.insert("XOM", "E");
    CHECK(map.sector_of("XOM") == "E");
    CHECK_THROWS_AS(map.insert("XOM", "F"), Error);
    CHECK_THROWS_AS(map.insert("AAPL", "TECH"), Error);
    CHECK_THROWS_WITH_AS(map.sector_of("MSFT"), doctest::Contains("missing"), Error);
}

TEST_CASE("state_average groups windows by state") {
    std::vector<corr::CorrelationWindow> windows = {uniform_window(4, 0.2),
                                                    uniform_window(4, 0.6),
                                                    uniform_window(4, 0.9)};
    cluster::StateCut cut;
    cut.state_count = 2;
    cut.window_state = {1, 1, 2};
    const auto averages = state_average(cut, windows);
    REQUIRE(averages.averages.size() == 2);
    CHECK(averages.counts == std::vector<std::size_t>{2, 1});
    CHECK(averages.averages[0].values(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(averages.averages[1].values(0, 1) == doctest::Approx(0.9).epsilon(1e-15));

    SUBCASE("count-weighted mean of state averages equals the overall average") {
        const auto overall = corr::average_matrix(windows);
        Matrix weighted(4, 4, 0.0);
        for (std::size_t s = 0; s < averages.averages.size(); ++s) {
            for (std::size_t e = 0; e < weighted.size(); ++e) {
                weighted.data()[e] += averages.averages[s].values.data()[e] *
                                      static_cast<double>(averages.counts[s]) / 3.0;
            }
        }
        for (std::size_t e = 0; e < weighted.size(); ++e) {
            CHECK(std::abs(weighted.data()[e] - overall.values.data()[e]) <= 1e-12);
        }
    }
}

TEST_CASE("sector_sort permutes into display-order blocks") {
    // Symbols deliberately shuffled across sectors.
    const auto map = map_of({{"JPM", "F"}, {"XOM", "E"}, {"CVX", "E"}, {"MSFT", "IT"}});
    auto w = window_with_symbols(Matrix::identity(4), {"JPM", "MSFT", "XOM", "CVX"});
    w.values(0, 1) = w.values(1, 0) = 0.5;  // JPM-MSFT

    const auto sorted = sector_sort(w, map);
    CHECK(sorted.window.symbols == std::vector<std::string>{"CVX", "XOM", "JPM", "MSFT"});
    REQUIRE(sorted.blocks.size() == 3);
    CHECK(sorted.blocks[0].sector == "E");
    CHECK(sorted.blocks[0].range == IndexRange{0, 2});
    CHECK(sorted.blocks[1].sector == "F");
    CHECK(sorted.blocks[2].sector == "IT");
    // The JPM-MSFT entry moved with the permutation.
    CHECK(sorted.window.values(2, 3) == 0.5);

    SUBCASE("sorting a sorted window is the identity permutation") {
        const auto again = sector_sort(sorted.window, map);
        CHECK(again.window.symbols == sorted.window.symbols);
        CHECK(again.window.values == sorted.window.values);
        for (std::size_t i = 0; i < again.permutation.size(); ++i) {
            CHECK(again.permutation[i] == i);
        }
    }
    SUBCASE("reversed input yields the exact reverse permutation") {
        auto reversed = sorted.window;
        std::reverse(reversed.symbols.begin(), reversed.symbols.end());
        const std::size_t k = 4;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                reversed.values(i, j) = sorted.window.values(k - 1 - i, k - 1 - j);
            }
        }
        const auto back = sector_sort(reversed, map);
        CHECK(back.permutation == std::vector<std::size_t>{3, 2, 1, 0});
        CHECK(back.window.values == sorted.window.values);
    }
    SUBCASE("unmapped symbol raises a missing-sector error naming it") {
        auto w2 = window_with_symbols(Matrix::identity(2), {"XOM", "IBM"});
        CHECK_THROWS_WITH_AS(sector_sort(w2, map), doctest::Contains("IBM"), Error);
    }
}

TEST_CASE("sector_sort preserves entries and zeta distances") {
    const auto a = oracle::random_correlation(8, 30, 91);
    const auto b = oracle::random_correlation(8, 30, 92);
    SectorMap map;
    const auto& order = SectorMap::display_order();
    for (std::size_t i = 0; i < 8; ++i) {
        map.insert(a.symbols[i], order[(i * 3) % order.size()]);
    }
    const auto sa = sector_sort(a, map);
    const auto sb = sector_sort(b, map);
    // Same permutation applied to both: zeta is invariant.
    CHECK(similarity::zeta(sa.window, sb.window) ==
          doctest::Approx(similarity::zeta(a, b)).epsilon(1e-15));
    // Multiset of entries preserved.
    std::vector<double> before(a.values.data(), a.values.data() + a.values.size());
    std::vector<double> after(sa.window.values.data(),
                              sa.window.values.data() + sa.window.values.size());
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    CHECK(before == after);
}

TEST_CASE("diff_to_overall subtracts elementwise with a zero diagonal") {
    const auto state = uniform_window(4, 0.6);
    const auto overall = uniform_window(4, 0.4);
    const auto diff = diff_to_overall(state, overall);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(diff(i, j) == (i == j ? 0.0 : doctest::Approx(0.2).epsilon(1e-15)));
        }
    }
    CHECK(diff_to_overall(overall, overall) == Matrix(4, 4, 0.0));

    SUBCASE("count-weighted sum of state differences vanishes") {
        std::vector<corr::CorrelationWindow> windows;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            windows.push_back(oracle::random_correlation(5, 20, seed));
        }
        cluster::StateCut cut;
        cut.state_count = 2;
        cut.window_state = {1, 1, 1, 2, 2};
        const auto averages = state_average(cut, windows);
        const auto all = corr::average_matrix(windows);
        Matrix weighted(5, 5, 0.0);
        for (std::size_t s = 0; s < averages.averages.size(); ++s) {
            const auto d = diff_to_overall(averages.averages[s], all);
            for (std::size_t e = 0; e < weighted.size(); ++e) {
                weighted.data()[e] +=
                    d.data()[e] * static_cast<double>(averages.counts[s]) / 5.0;
            }
        }
        for (std::size_t e = 0; e < weighted.size(); ++e) {
            CHECK(std::abs(weighted.data()[e]) <= 1e-12);
        }
    }
    SUBCASE("universe mismatch is rejected") {
        auto other = uniform_window(4, 0.4);
        other.symbols[0] = "ZZZ";
        CHECK_THROWS_AS(diff_to_overall(state, other), Error);
    }
}

TEST_CASE("coefficient_histogram bins over [-1, 1]") {
    SUBCASE("identity matrix: all pairs sit in the bin containing zero") {
        const auto w = window_with_symbols(Matrix::identity(3), {"A", "B", "C"});
        const auto h = coefficient_histogram(w, 4);
        CHECK(h.bin_edges == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
        CHECK(h.counts == std::vector<std::uint64_t>{0, 0, 3, 0});
        CHECK(h.total() == 3);  // K(K-1)/2
    }
    SUBCASE("uniform 0.95 lands every pair in the top bin") {
        const auto h = coefficient_histogram(uniform_window(10, 0.95), 40);
        CHECK(h.counts.back() == 45);
        CHECK(h.total() == 45);
    }
    SUBCASE("right edge of the final bin is closed") {
        const auto h = coefficient_histogram(uniform_window(3, 1.0), 40);
        CHECK(h.counts.back() == 3);
    }
    SUBCASE("diagonal can be included") {
        const auto w = window_with_symbols(Matrix::identity(3), {"A", "B", "C"});
        const auto h = coefficient_histogram(w, 4, true);
        CHECK(h.total() == 6);        // K(K+1)/2
        CHECK(h.counts.back() == 3);  // the three diagonal ones
    }
    SUBCASE("planted two-group panel occupies exactly the predicted bins") {
        // 3 + 2 symbols: within-group 0.8, cross-group -0.3.
        const std::size_t k = 5;
        Matrix values(k, k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                const bool same_group = (i < 3) == (j < 3);
                values(i, j) = i == j ? 1.0 : (same_group ? 0.8 : -0.3);
            }
        }
        const auto w = window_with_symbols(std::move(values), {"A", "B", "C", "D", "E"});
        const auto h = coefficient_histogram(w, 40);
        // Pairs: within = C(3,2) + C(2,2) = 4 at 0.8; cross = 3*2 = 6 at -0.3.
        std::size_t occupied = 0;
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            if (h.counts[b] == 0) continue;
            ++occupied;
            if (h.bin_edges[b] <= -0.3 && -0.3 < h.bin_edges[b + 1]) {
                CHECK(h.counts[b] == 6);
            } else {
                CHECK(h.bin_edges[b] <= 0.8);
                CHECK(0.8 < h.bin_edges[b + 1]);
                CHECK(h.counts[b] == 4);
            }
        }
        CHECK(occupied == 2);
    }
    SUBCASE("at least one bin is required") {
        CHECK_THROWS_AS(coefficient_histogram(uniform_window(3, 0.5), 0), Error);
    }
}
