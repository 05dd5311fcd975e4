// mstates: market-state analysis of return correlation structure.
//
// Pipeline stages are exposed as subcommands so intermediate artifacts can
// be produced and inspected independently; `run` executes the whole chain.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "marketstates/cluster.hpp"
#include "marketstates/core.hpp"
#include "marketstates/corr.hpp"
#include "marketstates/ingest.hpp"
#include "marketstates/io.hpp"
#include "marketstates/normalize.hpp"
#include "marketstates/pipeline.hpp"
#include "marketstates/similarity.hpp"
#include "marketstates/states.hpp"
#include "marketstates/svg.hpp"
#include "marketstates/synth.hpp"

namespace ms = marketstates;
namespace fs = std::filesystem;

namespace {

struct ReturnsArgs {
    std::string input;
    std::string output;
    std::string horizon = "1d";
    std::string stride = "1d";
    std::string session;
    std::string normalize_mode = "auto";  // auto: on for trading-day horizons
    std::size_t norm_window = 13;
    std::string degenerate_policy = "error";
    std::string start;
    std::string end;
};

int cmd_returns(const ReturnsArgs& args) {
    ms::ingest::ReturnConfig rc;
    rc.horizon = ms::ingest::Duration::parse(args.horizon);
    rc.stride = ms::ingest::Duration::parse(args.stride);
    if (!args.session.empty()) {
        rc.session = ms::ingest::SessionWindow::parse(args.session);
    } else if (rc.horizon.unit == ms::ingest::Duration::Unit::Seconds) {
        rc.session = ms::ingest::SessionWindow{};
    }

    bool do_normalize;
    if (args.normalize_mode == "auto") {
        do_normalize = rc.horizon.unit == ms::ingest::Duration::Unit::TradingDays;
    } else if (args.normalize_mode == "on") {
        do_normalize = true;
    } else if (args.normalize_mode == "off") {
        do_normalize = false;
    } else {
        ms::throw_validation("--normalize must be auto, on or off");
    }

    std::ifstream in(args.input);
    if (!in) ms::throw_io("cannot open '" + args.input + "'");
    const auto prices = ms::ingest::parse_price_table(in);

    std::vector<ms::ingest::ReturnSeries> returns;
    returns.reserve(prices.size());
    for (const auto& series : prices) {
        returns.push_back(ms::ingest::compute_returns(series, rc));
    }
    if (do_normalize) {
        ms::normalize::LocalNormConfig nc;
        nc.window = args.norm_window;
        nc.degenerate_policy = args.degenerate_policy == "emit-zero"
                                   ? ms::normalize::DegeneratePolicy::EmitZero
                                   : ms::normalize::DegeneratePolicy::Error;
        for (auto& series : returns) series = ms::normalize::local_normalize(series, nc);
    }

    ms::ingest::ReturnPanel panel;
    if (!args.start.empty() || !args.end.empty()) {
        if (args.start.empty() || args.end.empty()) {
            ms::throw_validation("--start and --end must be given together");
        }
        ms::DateRange range;
        range.start = ms::Timestamp::parse(args.start);
        ms::Timestamp end = ms::Timestamp::parse(args.end);
        range.end = end.has_time_of_day() ? end : end.end_of_day();
        panel = ms::ingest::align_universe(returns, range);
    } else {
        panel = ms::ingest::align_universe(returns);
    }
    ms::io::write_panel_csv(panel, args.output);
    std::cout << "panel: " << panel.series_count() << " series x " << panel.sample_count()
              << " samples -> " << args.output << "\n";
    return 0;
}

struct CorrArgs {
    std::string panel;
    std::string outdir;
    std::size_t length = 42;
    std::size_t stride = 0;  // 0: stride = length (disjoint) or 1 (sliding)
    std::string mode = "disjoint";
};

int cmd_corr(const CorrArgs& args) {
    const ms::ingest::ReturnPanel panel = ms::io::read_panel_csv(args.panel);
    ms::corr::WindowSpec spec;
    spec.length = args.length;
    if (args.mode == "disjoint") {
        spec.mode = ms::corr::WindowMode::Disjoint;
        spec.stride = args.stride == 0 ? args.length : args.stride;
    } else if (args.mode == "sliding") {
        spec.mode = ms::corr::WindowMode::Sliding;
        spec.stride = args.stride == 0 ? 1 : args.stride;
    } else {
        ms::throw_validation("--mode must be disjoint or sliding");
    }

    const auto windows = ms::corr::window_matrices(panel, spec);
    fs::create_directories(args.outdir);
    std::vector<ms::io::WindowSetEntry> entries;
    for (const auto& w : windows) {
        const std::string file = "corr_" + w.label_date.to_file_label() + ".csv";
        ms::io::write_correlation_csv(w, fs::path(args.outdir) / file);
        entries.push_back({file, w.window_start, w.window_end, w.label_date, w.sample_count});
    }
    ms::io::write_window_set(entries, fs::path(args.outdir) / "windows.json");
    std::cout << windows.size() << " windows -> " << args.outdir << "\n";
    return 0;
}

struct SimilarityArgs {
    std::string windows;
    std::string output;
    std::string svg;
    std::string measure = "zeta";
    double tol = 1e-10;
    int max_iter = 10000;
};

int cmd_similarity(const SimilarityArgs& args) {
    const auto windows = ms::io::load_windows(args.windows);
    const auto measure = ms::similarity::parse_measure(args.measure);
    const auto sim =
        ms::similarity::similarity_matrix(windows, measure, args.tol, args.max_iter);
    ms::io::write_similarity_csv(sim, args.output);
    if (!args.svg.empty()) {
        ms::io::write_text_file(
            args.svg, ms::svg::render_heatmap(
                          sim.values, {}, ms::svg::similarity_style(sim.values, args.measure)));
    }
    std::cout << sim.labels.size() << "x" << sim.labels.size() << " " << args.measure
              << " matrix -> " << args.output << "\n";
    return 0;
}

struct ClusterArgs {
    std::string windows;
    std::string tree = "tree.json";
    std::string timeline = "states.csv";
    std::string tree_svg;
    std::string timeline_svg;
    double threshold = 0.1465;
    int max_iter = 100;
    std::string init = "farthest-pair";
    std::uint64_t seed = 0;
    bool full_tree = false;
};

int cmd_cluster(const ClusterArgs& args) {
    const auto windows = ms::io::load_windows(args.windows);
    ms::cluster::ClusterConfig cfg;
    cfg.threshold = args.full_tree ? 0.0 : args.threshold;
    cfg.max_kmeans_iter = args.max_iter;
    cfg.init = ms::cluster::parse_init_policy(args.init);
    cfg.seed = args.seed;

    ms::cluster::ClusterNode root = ms::cluster::build_tree(windows, cfg);
    const ms::cluster::StateCut cut = ms::cluster::cut_to_states(root, args.threshold);
    const ms::cluster::StateSequence timeline = ms::cluster::state_timeline(cut, windows);

    const ms::io::TreeNodeDoc doc = ms::io::tree_doc(root, windows);
    ms::io::write_tree_json(doc, args.tree);
    ms::io::write_timeline_csv(timeline, args.timeline);
    if (!args.tree_svg.empty()) {
        ms::io::write_text_file(args.tree_svg, ms::svg::render_tree(doc));
    }
    if (!args.timeline_svg.empty()) {
        ms::io::write_text_file(args.timeline_svg, ms::svg::render_timeline(timeline));
    }
    std::cout << cut.state_count << " states over " << windows.size() << " windows -> "
              << args.tree << ", " << args.timeline << "\n";
    return 0;
}

struct StatesArgs {
    std::string windows;
    std::string timeline;
    std::string sectors;
    std::string outdir;
    std::size_t bins = 40;
};

int cmd_states(const StatesArgs& args) {
    const auto windows = ms::io::load_windows(args.windows);
    const auto sectors = ms::io::read_sector_map(args.sectors);
    const auto timeline = ms::io::read_timeline_csv(args.timeline);

    ms::cluster::StateCut cut;
    cut.window_state.assign(windows.size(), 0);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        bool found = false;
        for (const auto& [date, state] : timeline.entries) {
            if (date == windows[i].label_date) {
                cut.window_state[i] = state;
                cut.state_count = std::max(cut.state_count, state);
                found = true;
                break;
            }
        }
        if (!found) {
            ms::throw_validation("timeline has no state for window " +
                                 windows[i].label_date.to_string());
        }
    }

    fs::create_directories(args.outdir);
    const auto averages = ms::states::state_average(cut, windows);
    const auto overall = ms::corr::average_matrix(windows);
    const fs::path out(args.outdir);

    const auto overall_sorted = ms::states::sector_sort(overall, sectors);
    ms::io::write_correlation_csv(overall_sorted.window, out / "overall.csv");
    ms::io::write_text_file(
        (out / "overall.svg").string(),
        ms::svg::render_heatmap(overall_sorted.window.values, overall_sorted.window.symbols,
                                ms::svg::correlation_style("overall average"),
                                &overall_sorted.blocks));
    for (std::size_t s = 0; s < averages.averages.size(); ++s) {
        const std::string id = std::to_string(s + 1);
        const auto sorted = ms::states::sector_sort(averages.averages[s], sectors);
        ms::io::write_correlation_csv(sorted.window, out / ("state_" + id + ".csv"));
        ms::io::write_text_file(
            (out / ("state_" + id + ".svg")).string(),
            ms::svg::render_heatmap(sorted.window.values, sorted.window.symbols,
                                    ms::svg::correlation_style("state " + id),
                                    &sorted.blocks));
        ms::corr::CorrelationWindow diff_view = averages.averages[s];
        diff_view.values = ms::states::diff_to_overall(averages.averages[s], overall);
        const auto diff_sorted = ms::states::sector_sort(diff_view, sectors);
        ms::io::write_matrix_csv(diff_sorted.window.values, diff_sorted.window.symbols,
                                 out / ("state_" + id + "_diff.csv"));
        auto hist = ms::states::coefficient_histogram(averages.averages[s], args.bins);
        hist.source = "state " + id;
        ms::io::write_histogram_csv(hist, out / ("hist_state_" + id + ".csv"));
    }
    std::cout << averages.averages.size() << " state matrices -> " << args.outdir << "\n";
    return 0;
}

struct HistArgs {
    std::string matrix;
    std::string output;
    std::size_t bins = 40;
    bool include_diagonal = false;
};

int cmd_hist(const HistArgs& args) {
    const ms::io::LabeledMatrix lm = ms::io::read_matrix_csv(args.matrix);
    ms::corr::CorrelationWindow w;
    w.values = lm.values;
    w.symbols = lm.labels;
    const auto hist = ms::states::coefficient_histogram(w, args.bins, args.include_diagonal);
    ms::io::write_histogram_csv(hist, args.output);
    std::cout << hist.total() << " coefficients in " << args.bins << " bins -> "
              << args.output << "\n";
    return 0;
}

struct RenderArgs {
    std::string input;
    std::string output;
    std::string kind = "matrix";
    std::string sectors;
    std::string title;
};

int cmd_render(const RenderArgs& args) {
    std::string svg_text;
    if (args.kind == "matrix") {
        const ms::io::LabeledMatrix lm = ms::io::read_matrix_csv(args.input);
        if (!args.sectors.empty()) {
            const auto sectors = ms::io::read_sector_map(args.sectors);
            ms::corr::CorrelationWindow w;
            w.values = lm.values;
            w.symbols = lm.labels;
            const auto sorted = ms::states::sector_sort(w, sectors);
            svg_text = ms::svg::render_heatmap(sorted.window.values, sorted.window.symbols,
                                               ms::svg::correlation_style(args.title),
                                               &sorted.blocks);
        } else {
            svg_text = ms::svg::render_heatmap(lm.values, lm.labels,
                                               ms::svg::correlation_style(args.title));
        }
    } else if (args.kind == "similarity") {
        const ms::io::LabeledMatrix lm = ms::io::read_matrix_csv(args.input);
        svg_text = ms::svg::render_heatmap(lm.values, {},
                                           ms::svg::similarity_style(lm.values, args.title));
    } else if (args.kind == "tree") {
        svg_text = ms::svg::render_tree(ms::io::read_tree_json(args.input));
    } else if (args.kind == "timeline") {
        svg_text = ms::svg::render_timeline(ms::io::read_timeline_csv(args.input));
    } else {
        ms::throw_validation("--kind must be matrix, similarity, tree or timeline");
    }
    ms::io::write_text_file(args.output, svg_text);
    std::cout << args.kind << " -> " << args.output << "\n";
    return 0;
}

struct SynthArgs {
    std::string spec;
    std::string prices;
    std::string labels;
    std::string panel;
    std::string sectors;
};

int cmd_synth(const SynthArgs& args) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ms::io::read_text_file(args.spec));
    } catch (const nlohmann::json::exception& e) {
        ms::throw_validation("invalid JSON in '" + args.spec + "': " + e.what());
    }
    const auto spec =
        ms::synth::RegimeSpec::from_json(j, fs::path(args.spec).parent_path());
    const auto generated = ms::synth::generate_regime_panel(spec);

    if (!args.prices.empty()) {
        const auto prices = ms::synth::integrate_prices(generated.panel);
        std::ofstream out(args.prices);
        if (!out) ms::throw_io("cannot open '" + args.prices + "' for writing");
        ms::ingest::write_price_table(out, prices);
    }
    if (!args.labels.empty()) {
        std::ofstream out(args.labels);
        if (!out) ms::throw_io("cannot open '" + args.labels + "' for writing");
        out << "date,segment\n";
        for (std::size_t t = 0; t < generated.panel.sample_count(); ++t) {
            out << generated.panel.timestamps[t].to_string() << ','
                << generated.segment_labels[t] << '\n';
        }
    }
    if (!args.panel.empty()) {
        ms::io::write_panel_csv(generated.panel, args.panel);
    }
    if (!args.sectors.empty()) {
        // Round-robin sector assignment; useful for exercising sector plots.
        ms::states::SectorMap map;
        const auto& order = ms::states::SectorMap::display_order();
        for (std::size_t i = 0; i < generated.panel.series_count(); ++i) {
            map.insert(generated.panel.symbols[i], order[i % order.size()]);
        }
        ms::io::write_sector_map(map, generated.panel.symbols, args.sectors);
    }
    std::cout << "synthetic panel: " << generated.panel.series_count() << " series x "
              << generated.panel.sample_count() << " samples, "
              << spec.segments.size() << " segments\n";
    return 0;
}

struct RunArgs {
    std::string config;
    std::string prices;
    std::string sectors;
    std::string outdir;
    std::optional<double> threshold;
    std::optional<std::size_t> window_length;
    std::string window_mode;
    std::string measure;
    std::string normalize_mode;
    std::optional<std::size_t> norm_window;
    std::string horizon;
    std::string stride;
    std::string session;
    std::optional<std::size_t> bins;
    std::optional<std::uint64_t> seed;
    std::string init;
};

int cmd_run(const RunArgs& args) {
    ms::pipeline::PipelineConfig cfg;
    if (!args.config.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(ms::io::read_text_file(args.config));
        } catch (const nlohmann::json::exception& e) {
            ms::throw_validation("invalid JSON in '" + args.config + "': " + e.what());
        }
        cfg = ms::pipeline::PipelineConfig::from_json(j, fs::path(args.config).parent_path());
    }
    // Flags override config-file values.
    if (!args.prices.empty()) cfg.prices = args.prices;
    if (!args.sectors.empty()) cfg.sector_map = args.sectors;
    if (!args.outdir.empty()) cfg.output_dir = args.outdir;
    if (args.threshold) cfg.clustering.threshold = *args.threshold;
    if (args.window_length) {
        cfg.window.length = *args.window_length;
        if (cfg.window.mode == ms::corr::WindowMode::Disjoint) {
            cfg.window.stride = cfg.window.length;
        }
    }
    if (!args.window_mode.empty()) {
        if (args.window_mode == "disjoint") {
            cfg.window.mode = ms::corr::WindowMode::Disjoint;
            cfg.window.stride = cfg.window.length;
        } else if (args.window_mode == "sliding") {
            cfg.window.mode = ms::corr::WindowMode::Sliding;
            cfg.window.stride = 1;
        } else {
            ms::throw_validation("--window-mode must be disjoint or sliding");
        }
    }
    if (!args.measure.empty()) cfg.measure = ms::similarity::parse_measure(args.measure);
    if (!args.normalize_mode.empty()) {
        if (args.normalize_mode == "on") {
            cfg.normalize_enabled = true;
        } else if (args.normalize_mode == "off") {
            cfg.normalize_enabled = false;
        } else {
            ms::throw_validation("--normalize must be on or off");
        }
    }
    if (args.norm_window) cfg.norm.window = *args.norm_window;
    if (!args.horizon.empty()) cfg.returns.horizon = ms::ingest::Duration::parse(args.horizon);
    if (!args.stride.empty()) cfg.returns.stride = ms::ingest::Duration::parse(args.stride);
    if (!args.session.empty()) {
        cfg.returns.session = ms::ingest::SessionWindow::parse(args.session);
    }
    if (args.bins) cfg.histogram_bins = *args.bins;
    if (args.seed) cfg.clustering.seed = *args.seed;
    if (!args.init.empty()) cfg.clustering.init = ms::cluster::parse_init_policy(args.init);

    const ms::pipeline::Manifest manifest = ms::pipeline::run_pipeline(cfg);
    std::cout << manifest.artifacts.size() << " artifacts -> "
              << cfg.output_dir.string() << "/manifest.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"market state analysis from return correlation structure"};
    app.require_subcommand(1);

    ReturnsArgs returns_args;
    auto* returns_cmd =
        app.add_subcommand("returns", "build an aligned (optionally normalized) return panel");
    returns_cmd->add_option("--input", returns_args.input, "price CSV (date,symbol,price)")
        ->required();
    returns_cmd->add_option("--output", returns_args.output, "panel CSV to write")->required();
    returns_cmd->add_option("--horizon", returns_args.horizon, "return horizon (1d, 1h, ...)");
    returns_cmd->add_option("--stride", returns_args.stride, "sampling stride (1d, 1m, ...)");
    returns_cmd->add_option("--session", returns_args.session,
                            "intraday session window HH:MM-HH:MM (default 10:45-14:45)");
    returns_cmd->add_option("--normalize", returns_args.normalize_mode,
                            "local normalization: auto, on or off");
    returns_cmd->add_option("--norm-window", returns_args.norm_window,
                            "local normalization window length");
    returns_cmd->add_option("--degenerate-policy", returns_args.degenerate_policy,
                            "zero-variance window handling: error or emit-zero");
    returns_cmd->add_option("--start", returns_args.start, "alignment range start");
    returns_cmd->add_option("--end", returns_args.end, "alignment range end");

    CorrArgs corr_args;
    auto* corr_cmd = app.add_subcommand("corr", "correlation matrices over rolling windows");
    corr_cmd->add_option("--panel", corr_args.panel, "panel CSV")->required();
    corr_cmd->add_option("--outdir", corr_args.outdir, "directory for matrices + windows.json")
        ->required();
    corr_cmd->add_option("--window-length", corr_args.length, "window length in samples");
    corr_cmd->add_option("--window-stride", corr_args.stride, "window stride in samples");
    corr_cmd->add_option("--mode", corr_args.mode, "disjoint or sliding");

    SimilarityArgs sim_args;
    auto* sim_cmd = app.add_subcommand("similarity", "pairwise distances between windows");
    sim_cmd->add_option("--windows", sim_args.windows, "windows.json manifest")->required();
    sim_cmd->add_option("--output", sim_args.output, "similarity CSV to write")->required();
    sim_cmd->add_option("--svg", sim_args.svg, "also render a heatmap SVG");
    sim_cmd->add_option("--measure", sim_args.measure, "zeta or zeta_alt");
    sim_cmd->add_option("--tol", sim_args.tol, "power iteration tolerance");
    sim_cmd->add_option("--max-iter", sim_args.max_iter, "power iteration cap");

    ClusterArgs cluster_args;
    auto* cluster_cmd =
        app.add_subcommand("cluster", "top-down clustering into market states");
    cluster_cmd->add_option("--windows", cluster_args.windows, "windows.json manifest")
        ->required();
    cluster_cmd->add_option("--tree", cluster_args.tree, "tree JSON to write");
    cluster_cmd->add_option("--timeline", cluster_args.timeline, "state timeline CSV to write");
    cluster_cmd->add_option("--tree-svg", cluster_args.tree_svg, "dendrogram SVG");
    cluster_cmd->add_option("--timeline-svg", cluster_args.timeline_svg, "timeline SVG");
    cluster_cmd->add_option("--threshold", cluster_args.threshold,
                            "mean center-to-member distance stop value");
    cluster_cmd->add_option("--max-iter", cluster_args.max_iter, "k-means iteration cap");
    cluster_cmd->add_option("--init", cluster_args.init, "farthest-pair or seeded-random");
    cluster_cmd->add_option("--seed", cluster_args.seed, "seed for seeded-random init");
    cluster_cmd->add_flag("--full-tree", cluster_args.full_tree,
                          "divide to singletons, then cut at --threshold");

    StatesArgs states_args;
    auto* states_cmd =
        app.add_subcommand("states", "per-state average matrices, diffs and histograms");
    states_cmd->add_option("--windows", states_args.windows, "windows.json manifest")
        ->required();
    states_cmd->add_option("--timeline", states_args.timeline, "state timeline CSV")
        ->required();
    states_cmd->add_option("--sectors", states_args.sectors, "sector map CSV")->required();
    states_cmd->add_option("--outdir", states_args.outdir, "output directory")->required();
    states_cmd->add_option("--bins", states_args.bins, "histogram bin count");

    HistArgs hist_args;
    auto* hist_cmd = app.add_subcommand("hist", "histogram of correlation coefficients");
    hist_cmd->add_option("--matrix", hist_args.matrix, "matrix CSV")->required();
    hist_cmd->add_option("--output", hist_args.output, "histogram CSV to write")->required();
    hist_cmd->add_option("--bins", hist_args.bins, "bin count over [-1, 1]");
    hist_cmd->add_flag("--include-diagonal", hist_args.include_diagonal,
                       "count diagonal entries too");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "SVG rendering of pipeline artifacts");
    render_cmd->add_option("--input", render_args.input, "artifact to render")->required();
    render_cmd->add_option("--output", render_args.output, "SVG to write")->required();
    render_cmd->add_option("--kind", render_args.kind,
                           "matrix, similarity, tree or timeline");
    render_cmd->add_option("--sectors", render_args.sectors,
                           "sector map for block-sorted matrix rendering");
    render_cmd->add_option("--title", render_args.title, "plot title");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "synthetic regime-switching panel");
    synth_cmd->add_option("--spec", synth_args.spec, "regime spec JSON")->required();
    synth_cmd->add_option("--prices", synth_args.prices, "price CSV to write");
    synth_cmd->add_option("--labels", synth_args.labels, "ground-truth segment CSV to write");
    synth_cmd->add_option("--panel", synth_args.panel, "raw return panel CSV to write");
    synth_cmd->add_option("--sectors", synth_args.sectors,
                          "round-robin sector map CSV to write");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "full pipeline: prices to state reports");
    run_cmd->add_option("--config", run_args.config, "pipeline config JSON");
    run_cmd->add_option("--prices", run_args.prices, "price CSV (overrides config)");
    run_cmd->add_option("--sectors", run_args.sectors, "sector map CSV (overrides config)");
    run_cmd->add_option("--outdir", run_args.outdir, "output directory (overrides config)");
    run_cmd->add_option("--threshold", run_args.threshold, "clustering threshold");
    run_cmd->add_option("--window-length", run_args.window_length, "window length in samples");
    run_cmd->add_option("--window-mode", run_args.window_mode, "disjoint or sliding");
    run_cmd->add_option("--measure", run_args.measure, "zeta or zeta_alt");
    run_cmd->add_option("--normalize", run_args.normalize_mode, "on or off");
    run_cmd->add_option("--norm-window", run_args.norm_window, "normalization window");
    run_cmd->add_option("--horizon", run_args.horizon, "return horizon");
    run_cmd->add_option("--stride", run_args.stride, "return stride");
    run_cmd->add_option("--session", run_args.session, "intraday session HH:MM-HH:MM");
    run_cmd->add_option("--bins", run_args.bins, "histogram bin count");
    run_cmd->add_option("--seed", run_args.seed, "clustering seed");
    run_cmd->add_option("--init", run_args.init, "farthest-pair or seeded-random");

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
        if (returns_cmd->parsed()) return cmd_returns(returns_args);
        if (corr_cmd->parsed()) return cmd_corr(corr_args);
        if (sim_cmd->parsed()) return cmd_similarity(sim_args);
        if (cluster_cmd->parsed()) return cmd_cluster(cluster_args);
        if (states_cmd->parsed()) return cmd_states(states_args);
        if (hist_cmd->parsed()) return cmd_hist(hist_args);
        if (render_cmd->parsed()) return cmd_render(render_args);
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
        if (run_cmd->parsed()) return cmd_run(run_args);
    } catch (const ms::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
