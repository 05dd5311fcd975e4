#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "marketstates/cluster.hpp"
#include "marketstates/corr.hpp"
#include "marketstates/ingest.hpp"
#include "marketstates/normalize.hpp"
#include "marketstates/similarity.hpp"

namespace marketstates::pipeline {

// Everything the end-to-end run needs; JSON config files mirror this
// structure and CLI flags override individual fields.
struct PipelineConfig {
    std::filesystem::path prices;
    std::filesystem::path sector_map;
    std::filesystem::path output_dir;
    std::optional<DateRange> range;
    ingest::ReturnConfig returns;
    bool normalize_enabled = true;
    normalize::LocalNormConfig norm;
    corr::WindowSpec window;
    similarity::Measure measure = similarity::Measure::Zeta;
    cluster::ClusterConfig clustering;
    std::size_t histogram_bins = 40;

    void validate() const;
    static PipelineConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
    nlohmann::json to_json() const;
};

struct Artifact {
    std::string path;  // relative to the output directory
    std::uint64_t bytes = 0;
    std::string hash;  // fnv1a64 of the file content
};

struct Manifest {
    std::vector<Artifact> artifacts;  // sorted by path
    nlohmann::json config;

    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& j);
};

// ingest -> (normalize) -> corr -> similarity -> cluster -> states.
// Writes every artifact under cfg.output_dir plus a manifest.json listing
// them with content hashes. A failing stage removes all partial outputs and
// rethrows with the stage name attached.
Manifest run_pipeline(const PipelineConfig& cfg);

}  // namespace marketstates::pipeline
