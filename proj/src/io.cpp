#include "marketstates/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace marketstates::io {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter = ',') {
    std::vector<std::string> fields;
    std::string token;
    for (char ch : line) {
        if (ch == delimiter) {
            fields.push_back(token);
            token.clear();
        } else if (ch != '\r') {
            token.push_back(ch);
        }
    }
    fields.push_back(token);
    return fields;
}

double parse_double_or_throw(const std::string& text, const std::string& where) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        throw_validation(where + ": unparseable number '" + text + "'");
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_io("cannot open '" + path.string() + "' for writing");
    return out;
}

void require_stream_good(const std::ostream& out, const std::filesystem::path& path) {
    if (!out) throw_io("failed while writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      std::ostream& out) {
    if (values.rows() != labels.size() || values.cols() != labels.size()) {
        throw_validation("matrix dimensions do not match label list");
    }
    for (const std::string& label : labels) out << ',' << label;
    out << '\n';
    for (std::size_t i = 0; i < values.rows(); ++i) {
        out << labels[i];
        for (std::size_t j = 0; j < values.cols(); ++j) {
            out << ',' << format_double(values(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      const std::filesystem::path& path) {
    auto out = open_output(path);
    write_matrix_csv(values, labels, out);
    require_stream_good(out, path);
}

LabeledMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw_validation("matrix CSV is empty");
    const auto header = split(line);
    if (header.size() < 2 || !header[0].empty()) {
        throw_validation("matrix CSV header must start with an empty cell");
    }
    LabeledMatrix lm;
    lm.labels.assign(header.begin() + 1, header.end());
    const std::size_t k = lm.labels.size();
    lm.values = Matrix(k, k);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= k) throw_validation("matrix CSV has more rows than columns");
        const auto fields = split(line);
        if (fields.size() != k + 1) {
            throw_validation("matrix CSV row " + std::to_string(row + 2) + ": expected " +
                             std::to_string(k + 1) + " fields, got " +
                             std::to_string(fields.size()));
        }
        if (fields[0] != lm.labels[row]) {
            throw_validation("matrix CSV row " + std::to_string(row + 2) +
                             ": row label '" + fields[0] + "' does not match column '" +
                             lm.labels[row] + "'");
        }
        for (std::size_t j = 0; j < k; ++j) {
            lm.values(row, j) = parse_double_or_throw(
                fields[j + 1], "matrix CSV row " + std::to_string(row + 2));
        }
        ++row;
    }
    if (row != k) {
        throw_validation("matrix CSV has " + std::to_string(row) + " rows for " +
                         std::to_string(k) + " columns");
    }
    return lm;
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_matrix_csv(in);
}

void write_correlation_csv(const corr::CorrelationWindow& window,
                           const std::filesystem::path& path) {
    write_matrix_csv(window.values, window.symbols, path);
}

void write_similarity_csv(const similarity::SimilarityMatrix& sim,
                          const std::filesystem::path& path) {
    std::vector<std::string> labels;
    labels.reserve(sim.labels.size());
    for (const Timestamp& t : sim.labels) labels.push_back(t.to_string());
    write_matrix_csv(sim.values, labels, path);
}

similarity::SimilarityMatrix read_similarity_csv(const std::filesystem::path& path,
                                                 similarity::Measure measure) {
    LabeledMatrix lm = read_matrix_csv(path);
    similarity::SimilarityMatrix sim;
    sim.values = std::move(lm.values);
    sim.measure = measure;
    sim.labels.reserve(lm.labels.size());
    for (const std::string& label : lm.labels) sim.labels.push_back(Timestamp::parse(label));
    sim.validate();
    return sim;
}

void write_panel_csv(const ingest::ReturnPanel& panel, const std::filesystem::path& path) {
    auto out = open_output(path);
    if (panel.normalized) out << "# normalized\n";
    out << "date";
    for (const std::string& symbol : panel.symbols) out << ',' << symbol;
    out << '\n';
    for (std::size_t t = 0; t < panel.sample_count(); ++t) {
        out << panel.timestamps[t].to_string();
        for (std::size_t i = 0; i < panel.series_count(); ++i) {
            out << ',' << format_double(panel.values(i, t));
        }
        out << '\n';
    }
    require_stream_good(out, path);
}

ingest::ReturnPanel read_panel_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw_validation("panel CSV is empty: " + path.string());
    ingest::ReturnPanel panel;
    if (line.rfind("# normalized", 0) == 0) {
        panel.normalized = true;
        if (!std::getline(in, line)) throw_validation("panel CSV lacks a header row");
    }
    const auto header = split(line);
    if (header.size() < 3 || header[0] != "date") {
        throw_validation("panel CSV header must be date,<symbols...>");
    }
    panel.symbols.assign(header.begin() + 1, header.end());

    std::vector<std::vector<double>> rows;
    std::size_t line_number = panel.normalized ? 2 : 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            throw_validation("panel CSV line " + std::to_string(line_number) +
                             ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        }
        panel.timestamps.push_back(Timestamp::parse(fields[0]));
        std::vector<double> row;
        row.reserve(panel.symbols.size());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_double_or_throw(
                fields[i], "panel CSV line " + std::to_string(line_number)));
        }
        rows.push_back(std::move(row));
    }
    panel.values = Matrix(panel.symbols.size(), rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t i = 0; i < panel.symbols.size(); ++i) {
            panel.values(i, t) = rows[t][i];
        }
    }
    panel.validate();
    return panel;
}

states::SectorMap read_sector_map(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw_validation("sector map is empty");
    const auto header = split(line);
    if (header.size() != 2 || header[0] != "symbol" || header[1] != "sector") {
        throw_validation("sector map header must be symbol,sector");
    }
    states::SectorMap map;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != 2) {
            throw_validation("sector map line " + std::to_string(line_number) +
                             ": expected 2 fields");
        }
        map.insert(fields[0], fields[1]);
    }
    return map;
}

states::SectorMap read_sector_map(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_sector_map(in);
}

void write_sector_map(const states::SectorMap& map,
                      const std::vector<std::string>& symbols,
                      const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "symbol,sector\n";
    for (const std::string& symbol : symbols) {
        out << symbol << ',' << map.sector_of(symbol) << '\n';
    }
    require_stream_good(out, path);
}

void write_histogram_csv(const states::Histogram& histogram,
                         const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
        out << format_double(histogram.bin_edges[b]) << ','
            << format_double(histogram.bin_edges[b + 1]) << ',' << histogram.counts[b]
            << '\n';
    }
    require_stream_good(out, path);
}

states::Histogram read_histogram_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || split(line).size() != 3) {
        throw_validation("histogram CSV lacks bin_left,bin_right,count header");
    }
    states::Histogram h;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != 3) {
            throw_validation("histogram CSV line " + std::to_string(line_number) +
                             ": expected 3 fields");
        }
        const double left = parse_double_or_throw(fields[0], "histogram CSV");
        const double right = parse_double_or_throw(fields[1], "histogram CSV");
        if (h.bin_edges.empty()) h.bin_edges.push_back(left);
        h.bin_edges.push_back(right);
        h.counts.push_back(static_cast<std::uint64_t>(
            parse_double_or_throw(fields[2], "histogram CSV")));
    }
    return h;
}

void write_timeline_csv(const cluster::StateSequence& sequence,
                        const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "date,state\n";
    for (const auto& [date, state] : sequence.entries) {
        out << date.to_string() << ',' << state << '\n';
    }
    require_stream_good(out, path);
}

cluster::StateSequence read_timeline_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || split(line).size() != 2) {
        throw_validation("timeline CSV lacks date,state header");
    }
    cluster::StateSequence seq;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != 2) throw_validation("timeline CSV row needs 2 fields");
        seq.entries.emplace_back(Timestamp::parse(fields[0]),
                                 static_cast<int>(parse_double_or_throw(fields[1],
                                                                        "timeline CSV")));
    }
    seq.validate();
    return seq;
}

std::size_t TreeNodeDoc::leaf_count() const {
    if (children.empty()) return 1;
    std::size_t n = 0;
    for (const TreeNodeDoc& child : children) n += child.leaf_count();
    return n;
}

TreeNodeDoc tree_doc(const cluster::ClusterNode& node,
                     const std::vector<corr::CorrelationWindow>& windows) {
    TreeNodeDoc doc;
    doc.branch_length = node.branch_length;
    doc.mean_center_distance = node.mean_center_distance;
    doc.state_id = node.state_id;
    for (std::size_t idx : node.members) {
        doc.members.push_back(windows.at(idx).label_date.to_string());
    }
    for (const auto& child : node.children) {
        doc.children.push_back(tree_doc(*child, windows));
    }
    return doc;
}

nlohmann::json tree_to_json(const TreeNodeDoc& node) {
    nlohmann::json j;
    j["members"] = node.members;
    j["branch_length"] = node.branch_length;
    j["mean_center_distance"] = node.mean_center_distance;
    if (node.state_id) j["state_id"] = *node.state_id;
    j["children"] = nlohmann::json::array();
    for (const TreeNodeDoc& child : node.children) {
        j["children"].push_back(tree_to_json(child));
    }
    return j;
}

TreeNodeDoc tree_from_json(const nlohmann::json& j) {
    TreeNodeDoc node;
    try {
        node.members = j.at("members").get<std::vector<std::string>>();
        node.branch_length = j.at("branch_length").get<double>();
        node.mean_center_distance = j.at("mean_center_distance").get<double>();
        if (j.contains("state_id")) node.state_id = j.at("state_id").get<int>();
        for (const nlohmann::json& child : j.at("children")) {
            node.children.push_back(tree_from_json(child));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_validation(std::string("invalid tree JSON: ") + e.what());
    }
    return node;
}

void write_tree_json(const TreeNodeDoc& root, const std::filesystem::path& path) {
    write_text_file(path, tree_to_json(root).dump(2) + "\n");
}

TreeNodeDoc read_tree_json(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw_validation("invalid JSON in '" + path.string() + "': " + e.what());
    }
    return tree_from_json(j);
}

void write_window_set(const std::vector<WindowSetEntry>& entries,
                      const std::filesystem::path& path) {
    nlohmann::json j;
    j["windows"] = nlohmann::json::array();
    for (const WindowSetEntry& e : entries) {
        nlohmann::json je;
        je["file"] = e.file;
        je["start"] = e.window_start.to_string();
        je["end"] = e.window_end.to_string();
        je["label"] = e.label_date.to_string();
        je["samples"] = e.sample_count;
        j["windows"].push_back(je);
    }
    write_text_file(path, j.dump(2) + "\n");
}

std::vector<WindowSetEntry> read_window_set(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
        std::vector<WindowSetEntry> entries;
        for (const nlohmann::json& je : j.at("windows")) {
            WindowSetEntry e;
            e.file = je.at("file").get<std::string>();
            e.window_start = Timestamp::parse(je.at("start").get<std::string>());
            e.window_end = Timestamp::parse(je.at("end").get<std::string>());
            e.label_date = Timestamp::parse(je.at("label").get<std::string>());
            e.sample_count = je.at("samples").get<std::size_t>();
            entries.push_back(std::move(e));
        }
        return entries;
    } catch (const nlohmann::json::exception& e) {
        throw_validation("invalid window set in '" + path.string() + "': " + e.what());
    }
}

std::vector<corr::CorrelationWindow> load_windows(const std::filesystem::path& manifest) {
    const auto entries = read_window_set(manifest);
    const std::filesystem::path dir = manifest.parent_path();
    std::vector<corr::CorrelationWindow> windows;
    windows.reserve(entries.size());
    for (const WindowSetEntry& e : entries) {
        LabeledMatrix lm = read_matrix_csv(dir / e.file);
        corr::CorrelationWindow w;
        w.values = std::move(lm.values);
        w.symbols = std::move(lm.labels);
        w.window_start = e.window_start;
        w.window_end = e.window_end;
        w.label_date = e.label_date;
        w.sample_count = e.sample_count;
        w.validate();
        windows.push_back(std::move(w));
    }
    return windows;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw_io("failed while writing '" + path.string() + "'");
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace marketstates::io
