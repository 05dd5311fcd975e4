#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "marketstates/corr.hpp"

namespace marketstates::cluster {

enum class InitPolicy { FarthestPair, SeededRandom };

InitPolicy parse_init_policy(std::string_view name);
std::string to_string(InitPolicy policy);

struct ClusterConfig {
    double threshold = 0.1465;  // stop once mean center-to-member zeta falls below
    int max_kmeans_iter = 100;
    InitPolicy init = InitPolicy::FarthestPair;
    std::uint64_t seed = 0;  // used by SeededRandom only

    void validate() const;
};

struct BisectResult {
    std::vector<std::size_t> left;   // window indices, input order preserved
    std::vector<std::size_t> right;
    bool converged = true;    // false when max_kmeans_iter stopped the loop
    bool degenerate = false;  // true when an empty side had to be repaired
    int iterations = 0;
};

// One k-means (k=2) split under zeta: pick two initial centers, label every
// matrix by the nearer center, recast centers to the elementwise mean of
// their members, relabel, and repeat until the labeling is stable. A
// repeated labeling (cycle) is accepted as-is; an emptied side is repaired
// by moving the farthest member into it. Both output sides are non-empty.
BisectResult kmeans_bisect(const std::vector<corr::CorrelationWindow>& members,
                           const ClusterConfig& cfg);
BisectResult kmeans_bisect(const std::vector<corr::CorrelationWindow>& windows,
                           const std::vector<std::size_t>& members, const ClusterConfig& cfg);

struct ClusterNode {
    std::vector<std::size_t> members;  // indices into the clustered window list
    corr::CorrelationWindow center;    // elementwise mean of the members
    double branch_length = 0.0;        // zeta(center, parent center); 0 at the root
    double mean_center_distance = 0.0; // mean zeta(center, member)
    std::optional<int> state_id;       // set by cut_to_states
    std::vector<std::unique_ptr<ClusterNode>> children;  // zero or two

    bool is_leaf() const noexcept { return children.empty(); }
    std::size_t leaf_count() const noexcept;
};

// Top-down scheme: the whole set starts as one cluster and every node whose
// mean center-to-member distance exceeds the threshold is bisected. With
// threshold 0 the division continues until all distinct matrices are
// separated. Windows must be passed in time order.
ClusterNode build_tree(const std::vector<corr::CorrelationWindow>& windows,
                       const ClusterConfig& cfg);

struct StateCut {
    std::vector<int> window_state;  // 1-based state id per window index
    int state_count = 0;
};

// Labels the shallowest nodes whose mean center-to-member distance is at or
// below the threshold. State ids run 1..S in order of each state's first
// member in time. Re-cutting with a new threshold clears previous ids.
StateCut cut_to_states(ClusterNode& root, double threshold);

struct StateSequence {
    std::vector<std::pair<Timestamp, int>> entries;  // (label date, state id)

    void validate() const;
};

// Windows sorted by label date, paired with their state ids.
StateSequence state_timeline(const StateCut& cut,
                             const std::vector<corr::CorrelationWindow>& windows);

}  // namespace marketstates::cluster
