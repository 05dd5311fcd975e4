#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "marketstates/io.hpp"
#include "oracles.hpp"

using namespace marketstates;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mstates_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("matrix CSV round-trips exactly") {
    SUBCASE("1x1 matrix") {
        Matrix m(1, 1, 1.0);
        std::ostringstream out;
        io::write_matrix_csv(m, {"A"}, out);
        std::istringstream in(out.str());
        const auto lm = io::read_matrix_csv(in);
        CHECK(lm.labels == std::vector<std::string>{"A"});
        CHECK(lm.values == m);
    }
    SUBCASE("random symmetric matrix, bit-exact") {
        const auto w = oracle::random_correlation(5, 20, 4);
        std::ostringstream out;
        io::write_matrix_csv(w.values, w.symbols, out);
        std::istringstream in(out.str());
        const auto lm = io::read_matrix_csv(in);
        CHECK(lm.labels == w.symbols);
        REQUIRE(lm.values.size() == w.values.size());
        for (std::size_t e = 0; e < lm.values.size(); ++e) {
            CHECK(lm.values.data()[e] == w.values.data()[e]);
        }
    }
    SUBCASE("ragged row reports its position") {
        std::istringstream in(",A,B\nA,1,0\nB,0\n");
        CHECK_THROWS_WITH_AS(io::read_matrix_csv(in), doctest::Contains("row 3"), Error);
    }
    SUBCASE("row/column label mismatch is rejected") {
        std::istringstream in(",A,B\nA,1,0\nC,0,1\n");
        CHECK_THROWS_AS(io::read_matrix_csv(in), Error);
    }
    SUBCASE("missing rows are rejected") {
        std::istringstream in(",A,B\nA,1,0\n");
        CHECK_THROWS_AS(io::read_matrix_csv(in), Error);
    }
}

TEST_CASE("panel CSV round-trips including the normalized flag") {
    TempDir tmp;
    auto panel = oracle::random_panel(3, 7, 11);
    panel.normalized = true;
    const fs::path path = tmp.path / "panel.csv";
    io::write_panel_csv(panel, path);
    const auto back = io::read_panel_csv(path);
    CHECK(back.symbols == panel.symbols);
    CHECK(back.timestamps == panel.timestamps);
    CHECK(back.values == panel.values);
    CHECK(back.normalized);

    panel.normalized = false;
    io::write_panel_csv(panel, path);
    CHECK_FALSE(io::read_panel_csv(path).normalized);
}

TEST_CASE("similarity CSV round-trips with date labels") {
    TempDir tmp;
    similarity::SimilarityMatrix sim;
    sim.measure = similarity::Measure::Zeta;
    sim.values = Matrix(2, 2, 0.0);
    sim.values(0, 1) = sim.values(1, 0) = 0.25;
    sim.labels = {Timestamp::parse("2001-02-28"), Timestamp::parse("2001-04-30")};
    const fs::path path = tmp.path / "similarity.csv";
    io::write_similarity_csv(sim, path);
    const auto back = io::read_similarity_csv(path, similarity::Measure::Zeta);
    CHECK(back.labels == sim.labels);
    CHECK(back.values == sim.values);
}

TEST_CASE("sector map CSV") {
    std::istringstream in("symbol,sector\nXOM,E\nJPM,F\n");
    const auto map = io::read_sector_map(in);
    CHECK(map.size() == 2);
    CHECK(map.sector_of("JPM") == "F");

    std::istringstream bad_header("ticker,sector\nXOM,E\n");
    CHECK_THROWS_AS(io::read_sector_map(bad_header), Error);
    std::istringstream bad_code("symbol,sector\nXOM,OIL\n");
    CHECK_THROWS_AS(io::read_sector_map(bad_code), Error);
}

TEST_CASE("histogram CSV round-trips") {
    TempDir tmp;
    states::Histogram h;
    h.bin_edges = {-1.0, 0.0, 1.0};
    h.counts = {3, 7};
    h.source = "test";
    const fs::path path = tmp.path / "hist.csv";
    io::write_histogram_csv(h, path);
    const auto back = io::read_histogram_csv(path);
    CHECK(back.bin_edges == h.bin_edges);
    CHECK(back.counts == h.counts);
}

TEST_CASE("timeline CSV round-trips") {
    TempDir tmp;
    cluster::StateSequence seq;
    seq.entries = {{Timestamp::parse("2001-02-28"), 1},
                   {Timestamp::parse("2001-04-30"), 2},
                   {Timestamp::parse("2001-06-29"), 1}};
    const fs::path path = tmp.path / "timeline.csv";
    io::write_timeline_csv(seq, path);
    const auto back = io::read_timeline_csv(path);
    CHECK(back.entries == seq.entries);
}

TEST_CASE("tree JSON round-trips the document structure") {
    TempDir tmp;
    io::TreeNodeDoc root;
    root.members = {"2001-02-28", "2001-04-30"};
    root.branch_length = 0.0;
    root.mean_center_distance = 0.2;
    io::TreeNodeDoc left, right;
    left.members = {"2001-02-28"};
    left.branch_length = 0.1;
    left.state_id = 1;
    right.members = {"2001-04-30"};
    right.branch_length = 0.15;
    right.state_id = 2;
    root.children = {left, right};

    const fs::path path = tmp.path / "tree.json";
    io::write_tree_json(root, path);
    const auto back = io::read_tree_json(path);
    CHECK(back.members == root.members);
    REQUIRE(back.children.size() == 2);
    CHECK(back.children[0].state_id == 1);
    CHECK(back.children[1].branch_length == 0.15);
    CHECK_FALSE(back.state_id.has_value());
    CHECK(back.leaf_count() == 2);
}

TEST_CASE("window set manifest round-trips and loads matrices") {
    TempDir tmp;
    std::vector<corr::CorrelationWindow> windows;
    std::vector<io::WindowSetEntry> entries;
    for (int i = 0; i < 3; ++i) {
        auto w = oracle::random_correlation(4, 15, 600 + i);
        w.label_date = Timestamp::parse("2002-0" + std::to_string(i + 1) + "-15");
        w.window_start = w.label_date;
        w.window_end = w.label_date;
        const std::string file = "corr_" + w.label_date.to_file_label() + ".csv";
        io::write_correlation_csv(w, tmp.path / file);
        entries.push_back({file, w.window_start, w.window_end, w.label_date, 15});
        windows.push_back(std::move(w));
    }
    io::write_window_set(entries, tmp.path / "windows.json");
    const auto loaded = io::load_windows(tmp.path / "windows.json");
    REQUIRE(loaded.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(loaded[i].values == windows[i].values);
        CHECK(loaded[i].label_date == windows[i].label_date);
        CHECK(loaded[i].sample_count == 15);
    }
}

TEST_CASE("io errors carry the Io kind") {
    CHECK_THROWS_AS(io::read_text_file("/nonexistent/path/file.txt"), Error);
    try {
        io::read_matrix_csv(fs::path("/nonexistent/path/file.csv"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(e.exit_code() == 4);
    }
}

TEST_CASE("fnv1a64 hash is stable") {
    CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a64_hex("hello") != io::fnv1a64_hex("hellp"));
}
