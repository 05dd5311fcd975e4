#include <doctest.h>

#include <cmath>

#include "marketstates/svg.hpp"
#include "oracles.hpp"

using namespace marketstates;

TEST_CASE("render_heatmap: one rect per cell") {
    SUBCASE("1x1 matrix") {
        Matrix m(1, 1, 1.0);
        const auto text = svg::render_heatmap(m, {"A"}, svg::correlation_style());
        CHECK(oracle::count_occurrences(text, "class=\"cell\"") == 1);
        CHECK(oracle::xml_well_formed(text));
    }
    SUBCASE("2x2 identity: diagonal and off-diagonal cells differ in color") {
        const auto text =
            svg::render_heatmap(Matrix::identity(2), {"A", "B"}, svg::correlation_style());
        CHECK(oracle::count_occurrences(text, "class=\"cell\"") == 4);
        // value 1 -> red end, value 0 -> white midpoint
        CHECK(oracle::count_occurrences(text, "fill=\"rgb(178,24,43)\"") == 2);
        CHECK(oracle::count_occurrences(text, "fill=\"rgb(247,247,247)\"") == 2);
    }
    SUBCASE("cell count is K^2") {
        for (std::size_t k : {3, 7, 12}) {
            const auto w = oracle::random_correlation(k, 30, k);
            const auto text =
                svg::render_heatmap(w.values, w.symbols, svg::correlation_style());
            CHECK(oracle::count_occurrences(text, "class=\"cell\"") == k * k);
            CHECK(oracle::xml_well_formed(text));
        }
    }
    SUBCASE("non-finite entries name the offending cell") {
        Matrix m(2, 2, 0.0);
        m(0, 1) = std::nan("");
        CHECK_THROWS_WITH_AS(
            svg::render_heatmap(m, {"AA", "BB"}, svg::correlation_style()),
            doctest::Contains("(AA, BB)"), Error);
    }
    SUBCASE("sector blocks add outline rects") {
        const auto w = oracle::random_correlation(4, 20, 3);
        std::vector<states::SectorBlock> blocks = {{"E", {0, 2}}, {"F", {2, 4}}};
        const auto text =
            svg::render_heatmap(w.values, w.symbols, svg::correlation_style(), &blocks);
        CHECK(oracle::count_occurrences(text, "class=\"sector-block\"") == 2);
        CHECK(oracle::xml_well_formed(text));
    }
}

TEST_CASE("render_tree") {
    SUBCASE("single leaf") {
        io::TreeNodeDoc leaf;
        leaf.members = {"2001-02-28"};
        const auto text = svg::render_tree(leaf);
        CHECK(oracle::count_occurrences(text, "class=\"leaf\"") == 1);
        CHECK(oracle::xml_well_formed(text));
    }
    SUBCASE("two leaves with branch lengths drawn to scale") {
        io::TreeNodeDoc root, a, b;
        root.members = {"2001-02-28", "2001-04-30"};
        a.members = {"2001-02-28"};
        a.branch_length = 0.1;
        b.members = {"2001-04-30"};
        b.branch_length = 0.3;
        root.children = {a, b};
        const auto text = svg::render_tree(root);
        CHECK(oracle::count_occurrences(text, "class=\"leaf\"") == 2);
        CHECK(oracle::count_occurrences(text, "class=\"edge\"") == 2);
        // The longer branch spans the full plot width (scale = width/max).
        CHECK(oracle::xml_well_formed(text));
    }
    SUBCASE("leaf count matches the tree") {
        io::TreeNodeDoc root, a, b, b1, b2;
        a.members = {"2001-01-31"};
        b1.members = {"2001-02-28"};
        b2.members = {"2001-03-30"};
        b.members = {"2001-02-28", "2001-03-30"};
        b.children = {b1, b2};
        root.members = {"2001-01-31", "2001-02-28", "2001-03-30"};
        root.children = {a, b};
        const auto text = svg::render_tree(root);
        CHECK(oracle::count_occurrences(text, "class=\"leaf\"") == root.leaf_count());
        CHECK(root.leaf_count() == 3);
    }
}

TEST_CASE("render_timeline") {
    cluster::StateSequence seq;
    seq.entries = {{Timestamp::parse("2001-02-28"), 1},
                   {Timestamp::parse("2001-04-30"), 2},
                   {Timestamp::parse("2001-06-29"), 1},
                   {Timestamp::parse("2001-08-31"), 3}};
    const auto text = svg::render_timeline(seq);
    CHECK(oracle::count_occurrences(text, "class=\"pt\"") == 4);
    CHECK(oracle::xml_well_formed(text));
    CHECK_THROWS_AS(svg::render_timeline(cluster::StateSequence{}), Error);
}

TEST_CASE("similarity style spans zero to the observed maximum") {
    Matrix m(2, 2, 0.0);
    m(0, 1) = m(1, 0) = 0.75;
    const auto style = svg::similarity_style(m);
    CHECK(style.lo == 0.0);
    CHECK(style.hi == 0.75);
}
