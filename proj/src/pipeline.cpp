#include "marketstates/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "marketstates/io.hpp"
#include "marketstates/states.hpp"
#include "marketstates/svg.hpp"

namespace marketstates::pipeline {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
    if (prices.empty()) throw_validation("pipeline config: prices path is required");
    if (!fs::exists(prices)) {
        throw_validation("pipeline config: prices file '" + prices.string() +
                         "' does not exist");
    }
    if (sector_map.empty()) {
        throw_validation("pipeline config: sector map is required for the states stage");
    }
    if (!fs::exists(sector_map)) {
        throw_validation("pipeline config: sector map '" + sector_map.string() +
                         "' does not exist");
    }
    if (output_dir.empty()) throw_validation("pipeline config: output_dir is required");
    if (histogram_bins < 1) throw_validation("pipeline config: histogram_bins must be >= 1");
    window.validate();
    clustering.validate();
    if (norm.window < 2) throw_validation("pipeline config: normalization window must be >= 2");
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
    PipelineConfig cfg;
    auto resolve = [&](const std::string& p) -> fs::path {
        fs::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    try {
        if (j.contains("prices")) cfg.prices = resolve(j.at("prices").get<std::string>());
        if (j.contains("sector_map")) {
            cfg.sector_map = resolve(j.at("sector_map").get<std::string>());
        }
        if (j.contains("output_dir")) {
            cfg.output_dir = resolve(j.at("output_dir").get<std::string>());
        }
        if (j.contains("range")) {
            DateRange range;
            range.start = Timestamp::parse(j.at("range").at("start").get<std::string>());
            Timestamp end = Timestamp::parse(j.at("range").at("end").get<std::string>());
            range.end = end.has_time_of_day() ? end : end.end_of_day();
            cfg.range = range;
        }
        if (j.contains("returns")) {
            const nlohmann::json& jr = j.at("returns");
            if (jr.contains("horizon")) {
                cfg.returns.horizon = ingest::Duration::parse(jr.at("horizon").get<std::string>());
            }
            if (jr.contains("stride")) {
                cfg.returns.stride = ingest::Duration::parse(jr.at("stride").get<std::string>());
            }
            if (jr.contains("session")) {
                cfg.returns.session =
                    ingest::SessionWindow::parse(jr.at("session").get<std::string>());
            }
        }
        if (j.contains("normalize")) {
            const nlohmann::json& jn = j.at("normalize");
            cfg.normalize_enabled = jn.value("enabled", true);
            cfg.norm.window = jn.value("n", std::size_t{13});
            const std::string policy = jn.value("degenerate_policy", "error");
            if (policy == "emit-zero") {
                cfg.norm.degenerate_policy = normalize::DegeneratePolicy::EmitZero;
            } else if (policy == "error") {
                cfg.norm.degenerate_policy = normalize::DegeneratePolicy::Error;
            } else {
                throw_validation("unknown degenerate_policy '" + policy + "'");
            }
        }
        if (j.contains("window")) {
            const nlohmann::json& jw = j.at("window");
            cfg.window.length = jw.value("length", std::size_t{42});
            const std::string mode = jw.value("mode", "disjoint");
            if (mode == "disjoint") {
                cfg.window.mode = corr::WindowMode::Disjoint;
                cfg.window.stride = cfg.window.length;
            } else if (mode == "sliding") {
                cfg.window.mode = corr::WindowMode::Sliding;
                cfg.window.stride = jw.value("stride", std::size_t{1});
            } else {
                throw_validation("unknown window mode '" + mode + "'");
            }
        }
        if (j.contains("measure")) {
            cfg.measure = similarity::parse_measure(j.at("measure").get<std::string>());
        }
        if (j.contains("cluster")) {
            const nlohmann::json& jc = j.at("cluster");
            cfg.clustering.threshold = jc.value("threshold", 0.1465);
            cfg.clustering.max_kmeans_iter = jc.value("max_kmeans_iter", 100);
            cfg.clustering.init =
                cluster::parse_init_policy(jc.value("init", "farthest-pair"));
            cfg.clustering.seed = jc.value("seed", std::uint64_t{0});
        }
        cfg.histogram_bins = j.value("histogram_bins", std::size_t{40});
    } catch (const nlohmann::json::exception& e) {
        throw_validation(std::string("invalid pipeline config JSON: ") + e.what());
    }
    return cfg;
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json j;
    j["prices"] = prices.string();
    j["sector_map"] = sector_map.string();
    j["output_dir"] = output_dir.string();
    if (range) {
        j["range"] = {{"start", range->start.to_string()}, {"end", range->end.to_string()}};
    }
    j["returns"] = {{"horizon", returns.horizon.to_string()},
                    {"stride", returns.stride.to_string()}};
    if (returns.session) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%02d:%02d-%02d:%02d",
                      returns.session->start_minute / 60, returns.session->start_minute % 60,
                      returns.session->end_minute / 60, returns.session->end_minute % 60);
        j["returns"]["session"] = buf;
    }
    j["normalize"] = {
        {"enabled", normalize_enabled},
        {"n", norm.window},
        {"degenerate_policy",
         norm.degenerate_policy == normalize::DegeneratePolicy::EmitZero ? "emit-zero"
                                                                         : "error"}};
    j["window"] = {
        {"length", window.length},
        {"stride", window.stride},
        {"mode", window.mode == corr::WindowMode::Disjoint ? "disjoint" : "sliding"}};
    j["measure"] = similarity::to_string(measure);
    j["cluster"] = {{"threshold", clustering.threshold},
                    {"max_kmeans_iter", clustering.max_kmeans_iter},
                    {"init", cluster::to_string(clustering.init)},
                    {"seed", clustering.seed}};
    j["histogram_bins"] = histogram_bins;
    return j;
}

nlohmann::json Manifest::to_json() const {
    nlohmann::json j;
    j["artifacts"] = nlohmann::json::array();
    for (const Artifact& a : artifacts) {
        j["artifacts"].push_back(
            {{"path", a.path}, {"bytes", a.bytes}, {"hash", a.hash}});
    }
    j["config"] = config;
    return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
    Manifest m;
    try {
        for (const nlohmann::json& ja : j.at("artifacts")) {
            m.artifacts.push_back({ja.at("path").get<std::string>(),
                                   ja.at("bytes").get<std::uint64_t>(),
                                   ja.at("hash").get<std::string>()});
        }
        m.config = j.value("config", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw_validation(std::string("invalid manifest JSON: ") + e.what());
    }
    return m;
}

namespace {

// Records every artifact written under the output directory so a failing
// stage can remove them and the manifest can hash them.
class ArtifactSink {
public:
    explicit ArtifactSink(fs::path base) : base_(std::move(base)) {
        std::error_code ec;
        fs::create_directories(base_, ec);
        if (ec) throw_io("cannot create output directory '" + base_.string() + "'");
    }

    fs::path prepare(const std::string& relative) {
        const fs::path full = base_ / relative;
        std::error_code ec;
        fs::create_directories(full.parent_path(), ec);
        if (ec) throw_io("cannot create directory for '" + full.string() + "'");
        return full;
    }

    void record(const std::string& relative) {
        const std::string content = io::read_text_file(base_ / relative);
        artifacts_.push_back(
            {relative, content.size(), io::fnv1a64_hex(content)});
    }

    void write_text(const std::string& relative, const std::string& content) {
        io::write_text_file(prepare(relative), content);
        record(relative);
    }

    void remove_all_written() {
        std::error_code ec;
        for (const Artifact& a : artifacts_) {
            fs::remove(base_ / a.path, ec);
        }
        for (const char* dir : {"windows", "states", "hist"}) {
            fs::remove(base_ / dir, ec);  // succeeds only when empty
        }
        artifacts_.clear();
    }

    std::vector<Artifact> sorted_artifacts() const {
        std::vector<Artifact> sorted = artifacts_;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
        return sorted;
    }

private:
    fs::path base_;
    std::vector<Artifact> artifacts_;
};

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + " stage: " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Numeric, std::string(name) + " stage: " + e.what());
    }
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    ArtifactSink sink(cfg.output_dir);
    try {
        // ingest
        ingest::ReturnPanel panel = stage("ingest", [&] {
            std::ifstream in(cfg.prices);
            if (!in) throw_io("cannot open '" + cfg.prices.string() + "'");
            const auto prices = ingest::parse_price_table(in);
            std::vector<ingest::ReturnSeries> returns;
            returns.reserve(prices.size());
            for (const ingest::PriceSeries& series : prices) {
                returns.push_back(ingest::compute_returns(series, cfg.returns));
            }
            if (cfg.normalize_enabled) {
                for (ingest::ReturnSeries& series : returns) {
                    series = normalize::local_normalize(series, cfg.norm);
                }
            }
            return cfg.range ? ingest::align_universe(returns, *cfg.range)
                             : ingest::align_universe(returns);
        });
        stage("ingest", [&] {
            const fs::path path = sink.prepare("panel.csv");
            io::write_panel_csv(panel, path);
            sink.record("panel.csv");
            return 0;
        });

        // corr
        std::vector<corr::CorrelationWindow> windows = stage("corr", [&] {
            return corr::window_matrices(panel, cfg.window);
        });
        stage("corr", [&] {
            std::vector<io::WindowSetEntry> entries;
            for (const corr::CorrelationWindow& w : windows) {
                const std::string rel = "windows/corr_" + w.label_date.to_file_label() + ".csv";
                io::write_correlation_csv(w, sink.prepare(rel));
                sink.record(rel);
                entries.push_back({"windows/corr_" + w.label_date.to_file_label() + ".csv",
                                   w.window_start, w.window_end, w.label_date,
                                   w.sample_count});
            }
            io::write_window_set(entries, sink.prepare("windows.json"));
            sink.record("windows.json");
            return 0;
        });

        // similarity
        const similarity::SimilarityMatrix sim = stage("similarity", [&] {
            return similarity::similarity_matrix(windows, cfg.measure);
        });
        stage("similarity", [&] {
            io::write_similarity_csv(sim, sink.prepare("similarity.csv"));
            sink.record("similarity.csv");
            sink.write_text("similarity.svg",
                            svg::render_heatmap(
                                sim.values, {},
                                svg::similarity_style(sim.values,
                                                      similarity::to_string(sim.measure))));
            return 0;
        });

        // cluster
        cluster::ClusterNode root = stage("cluster", [&] {
            return cluster::build_tree(windows, cfg.clustering);
        });
        const cluster::StateCut cut = stage("cluster", [&] {
            return cluster::cut_to_states(root, cfg.clustering.threshold);
        });
        const cluster::StateSequence timeline = stage("cluster", [&] {
            return cluster::state_timeline(cut, windows);
        });
        stage("cluster", [&] {
            const io::TreeNodeDoc doc = io::tree_doc(root, windows);
            io::write_tree_json(doc, sink.prepare("tree.json"));
            sink.record("tree.json");
            sink.write_text("tree.svg", svg::render_tree(doc));
            io::write_timeline_csv(timeline, sink.prepare("states.csv"));
            sink.record("states.csv");
            sink.write_text("timeline.svg", svg::render_timeline(timeline));
            return 0;
        });

        // states
        stage("states", [&] {
            const states::SectorMap sectors = io::read_sector_map(cfg.sector_map);
            const states::StateAverages averages = states::state_average(cut, windows);
            const corr::CorrelationWindow overall = corr::average_matrix(windows);

            const states::SectorSorted overall_sorted = states::sector_sort(overall, sectors);
            io::write_correlation_csv(overall_sorted.window, sink.prepare("overall.csv"));
            sink.record("overall.csv");
            sink.write_text("overall.svg",
                            svg::render_heatmap(overall_sorted.window.values,
                                                overall_sorted.window.symbols,
                                                svg::correlation_style("overall average"),
                                                &overall_sorted.blocks));

            for (std::size_t s = 0; s < averages.averages.size(); ++s) {
                const std::string id = std::to_string(s + 1);
                const states::SectorSorted sorted =
                    states::sector_sort(averages.averages[s], sectors);
                io::write_correlation_csv(sorted.window,
                                          sink.prepare("states/state_" + id + ".csv"));
                sink.record("states/state_" + id + ".csv");
                sink.write_text("states/state_" + id + ".svg",
                                svg::render_heatmap(sorted.window.values,
                                                    sorted.window.symbols,
                                                    svg::correlation_style("state " + id),
                                                    &sorted.blocks));

                const Matrix diff = states::diff_to_overall(averages.averages[s], overall);
                corr::CorrelationWindow diff_view = averages.averages[s];
                diff_view.values = diff;
                const states::SectorSorted diff_sorted =
                    states::sector_sort(diff_view, sectors);
                io::write_matrix_csv(diff_sorted.window.values, diff_sorted.window.symbols,
                                     sink.prepare("states/state_" + id + "_diff.csv"));
                sink.record("states/state_" + id + "_diff.csv");

                states::Histogram hist =
                    states::coefficient_histogram(averages.averages[s], cfg.histogram_bins);
                hist.source = "state " + id;
                io::write_histogram_csv(hist, sink.prepare("hist/state_" + id + ".csv"));
                sink.record("hist/state_" + id + ".csv");
            }
            for (const corr::CorrelationWindow& w : windows) {
                const states::Histogram hist =
                    states::coefficient_histogram(w, cfg.histogram_bins);
                const std::string rel = "hist/window_" + w.label_date.to_file_label() + ".csv";
                io::write_histogram_csv(hist, sink.prepare(rel));
                sink.record(rel);
            }
            return 0;
        });

        Manifest manifest;
        manifest.artifacts = sink.sorted_artifacts();
        manifest.config = cfg.to_json();
        io::write_text_file(sink.prepare("manifest.json"),
                            manifest.to_json().dump(2) + "\n");
        return manifest;
    } catch (...) {
        sink.remove_all_written();
        throw;
    }
}

}  // namespace marketstates::pipeline
