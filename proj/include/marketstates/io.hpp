#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "marketstates/cluster.hpp"
#include "marketstates/core.hpp"
#include "marketstates/corr.hpp"
#include "marketstates/ingest.hpp"
#include "marketstates/similarity.hpp"
#include "marketstates/states.hpp"

namespace marketstates::io {

// Square matrix with row/column labels: first CSV row and column carry the
// labels, values are serialized with 17 significant digits so doubles
// round-trip exactly.
struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix values;
};

void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      std::ostream& out);
void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      const std::filesystem::path& path);
LabeledMatrix read_matrix_csv(std::istream& in);
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

void write_correlation_csv(const corr::CorrelationWindow& window,
                           const std::filesystem::path& path);

void write_similarity_csv(const similarity::SimilarityMatrix& sim,
                          const std::filesystem::path& path);
similarity::SimilarityMatrix read_similarity_csv(const std::filesystem::path& path,
                                                 similarity::Measure measure);

// Wide return panel: header `date,SYM...`, one row per timestamp. A leading
// `# normalized` line marks locally normalized panels.
void write_panel_csv(const ingest::ReturnPanel& panel, const std::filesystem::path& path);
ingest::ReturnPanel read_panel_csv(const std::filesystem::path& path);

// Sector map: header `symbol,sector`.
states::SectorMap read_sector_map(std::istream& in);
states::SectorMap read_sector_map(const std::filesystem::path& path);
void write_sector_map(const states::SectorMap& map,
                      const std::vector<std::string>& symbols,
                      const std::filesystem::path& path);

// Histogram: header `bin_left,bin_right,count`.
void write_histogram_csv(const states::Histogram& histogram,
                         const std::filesystem::path& path);
states::Histogram read_histogram_csv(const std::filesystem::path& path);

// State timeline: header `date,state`.
void write_timeline_csv(const cluster::StateSequence& sequence,
                        const std::filesystem::path& path);
cluster::StateSequence read_timeline_csv(const std::filesystem::path& path);

// Serializable view of a cluster tree: member window labels instead of
// indices. This is the schema of the tree JSON artifact.
struct TreeNodeDoc {
    std::vector<std::string> members;
    double branch_length = 0.0;
    double mean_center_distance = 0.0;
    std::optional<int> state_id;
    std::vector<TreeNodeDoc> children;

    std::size_t leaf_count() const;
};

TreeNodeDoc tree_doc(const cluster::ClusterNode& root,
                     const std::vector<corr::CorrelationWindow>& windows);
nlohmann::json tree_to_json(const TreeNodeDoc& node);
TreeNodeDoc tree_from_json(const nlohmann::json& j);
void write_tree_json(const TreeNodeDoc& root, const std::filesystem::path& path);
TreeNodeDoc read_tree_json(const std::filesystem::path& path);

// Windows manifest: per-window matrix file and metadata, in time order.
struct WindowSetEntry {
    std::string file;
    Timestamp window_start;
    Timestamp window_end;
    Timestamp label_date;
    std::size_t sample_count = 0;
};

void write_window_set(const std::vector<WindowSetEntry>& entries,
                      const std::filesystem::path& path);
std::vector<WindowSetEntry> read_window_set(const std::filesystem::path& path);

// Loads the matrices listed in a window-set manifest (paths resolved
// against the manifest's directory).
std::vector<corr::CorrelationWindow> load_windows(const std::filesystem::path& manifest);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64-bit content hash, hex-encoded; used by the artifact manifest.
std::string fnv1a64_hex(std::string_view bytes);

// %.17g formatting shared by every writer.
std::string format_double(double value);

}  // namespace marketstates::io
