#include "marketstates/cluster.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "marketstates/kernels.hpp"

namespace marketstates::cluster {

InitPolicy parse_init_policy(std::string_view name) {
    if (name == "farthest-pair") return InitPolicy::FarthestPair;
    if (name == "seeded-random") return InitPolicy::SeededRandom;
    throw_validation("unknown init policy '" + std::string(name) +
                     "' (want farthest-pair or seeded-random)");
}

std::string to_string(InitPolicy policy) {
    return policy == InitPolicy::FarthestPair ? "farthest-pair" : "seeded-random";
}

void ClusterConfig::validate() const {
    if (threshold < 0.0) throw_validation("cluster threshold must be >= 0");
    if (max_kmeans_iter < 1) throw_validation("max_kmeans_iter must be >= 1");
}

namespace {

using corr::CorrelationWindow;

kernels::MatrixRefs member_refs(const std::vector<CorrelationWindow>& windows,
                                const std::vector<std::size_t>& members,
                                const std::vector<std::uint8_t>& labels,
                                std::uint8_t side) {
    kernels::MatrixRefs refs;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (labels[i] == side) refs.push_back(&windows[members[i]].values);
    }
    return refs;
}

std::pair<std::size_t, std::size_t> farthest_pair(
    const std::vector<CorrelationWindow>& windows, const std::vector<std::size_t>& members) {
    kernels::MatrixRefs refs;
    refs.reserve(members.size());
    for (std::size_t idx : members) refs.push_back(&windows[idx].values);
    const Matrix d = kernels::pairwise_l1_mean(refs);
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (d(i, j) > best) {
                best = d(i, j);
                bi = i;
                bj = j;
            }
        }
    }
    return {bi, bj};
}

BisectResult bisect_indices(const std::vector<CorrelationWindow>& windows,
                            const std::vector<std::size_t>& members,
                            const ClusterConfig& cfg, std::mt19937_64& engine) {
    cfg.validate();
    const std::size_t m = members.size();
    if (m < 2) throw_validation("bisection needs at least 2 members");
    for (std::size_t i = 1; i < m; ++i) {
        if (windows[members[i]].symbols != windows[members[0]].symbols) {
            throw_validation("bisection over incompatible universes");
        }
    }

    // Two initial centers: copies of two member matrices.
    std::size_t seed0, seed1;
    if (cfg.init == InitPolicy::FarthestPair) {
        std::tie(seed0, seed1) = farthest_pair(windows, members);
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        seed0 = pick(engine);
        do {
            seed1 = pick(engine);
        } while (seed1 == seed0);
        if (seed0 > seed1) std::swap(seed0, seed1);
    }
    Matrix center0 = windows[members[seed0]].values;
    Matrix center1 = windows[members[seed1]].values;

    kernels::MatrixRefs refs;
    refs.reserve(m);
    for (std::size_t idx : members) refs.push_back(&windows[idx].values);

    BisectResult result;
    // Initial labeling; ties fall to the lower center index.
    std::vector<std::uint8_t> labels(m, 0);
    kernels::assign_nearest(refs, center0, center1, labels);

    // Moves the member farthest from the occupied side's center into the
    // empty side, so both sides stay non-empty.
    auto repair_empty_side = [&](const Matrix& c0, const Matrix& c1) {
        const std::size_t zeros = static_cast<std::size_t>(
            std::count(labels.begin(), labels.end(), std::uint8_t{0}));
        std::uint8_t empty;
        if (zeros == 0) {
            empty = 0;
        } else if (zeros == m) {
            empty = 1;
        } else {
            return;
        }
        const Matrix& occupied_center = empty == 0 ? c1 : c0;
        std::size_t farthest = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = kernels::l1_mean(*refs[i], occupied_center);
            if (d > far_dist) {
                far_dist = d;
                farthest = i;
            }
        }
        labels[farthest] = empty;
        result.degenerate = true;
    };
    repair_empty_side(center0, center1);

    std::set<std::vector<std::uint8_t>> seen;
    seen.insert(labels);
    result.converged = false;
    for (int iter = 1; iter <= cfg.max_kmeans_iter; ++iter) {
        result.iterations = iter;
        center0 = kernels::elementwise_mean(member_refs(windows, members, labels, 0));
        center1 = kernels::elementwise_mean(member_refs(windows, members, labels, 1));

        std::vector<std::uint8_t> next = labels;
        kernels::assign_nearest(refs, center0, center1, next);
        const bool stable = next == labels;
        labels = std::move(next);
        repair_empty_side(center0, center1);
        if (stable) {
            result.converged = true;
            break;
        }
        if (!seen.insert(labels).second) {
            // Labeling seen before: the loop would cycle. Accept it.
            result.converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        (labels[i] == 0 ? result.left : result.right).push_back(members[i]);
    }
    return result;
}

double mean_center_distance(const std::vector<CorrelationWindow>& windows,
                            const std::vector<std::size_t>& members, const Matrix& center) {
    double sum = 0.0;
    for (std::size_t idx : members) {
        sum += kernels::l1_mean(windows[idx].values, center);
    }
    return sum / static_cast<double>(members.size());
}

ClusterNode build_node(const std::vector<CorrelationWindow>& windows,
                       std::vector<std::size_t> members, const ClusterConfig& cfg,
                       const Matrix* parent_center, std::mt19937_64& engine) {
    ClusterNode node;
    node.center = corr::average_matrix(windows, members);
    node.mean_center_distance = mean_center_distance(windows, members, node.center.values);
    if (parent_center != nullptr) {
        node.branch_length = kernels::l1_mean(node.center.values, *parent_center);
    }
    node.members = std::move(members);

    if (node.members.size() >= 2 && node.mean_center_distance > cfg.threshold) {
        BisectResult split = bisect_indices(windows, node.members, cfg, engine);
        node.children.push_back(std::make_unique<ClusterNode>(build_node(
            windows, std::move(split.left), cfg, &node.center.values, engine)));
        node.children.push_back(std::make_unique<ClusterNode>(build_node(
            windows, std::move(split.right), cfg, &node.center.values, engine)));
    }
    return node;
}

}  // namespace

BisectResult kmeans_bisect(const std::vector<CorrelationWindow>& windows,
                           const std::vector<std::size_t>& members, const ClusterConfig& cfg) {
    std::mt19937_64 engine(cfg.seed);
    return bisect_indices(windows, members, cfg, engine);
}

BisectResult kmeans_bisect(const std::vector<CorrelationWindow>& members,
                           const ClusterConfig& cfg) {
    std::vector<std::size_t> all(members.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return kmeans_bisect(members, all, cfg);
}

std::size_t ClusterNode::leaf_count() const noexcept {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& child : children) n += child->leaf_count();
    return n;
}

ClusterNode build_tree(const std::vector<CorrelationWindow>& windows,
                       const ClusterConfig& cfg) {
    if (windows.empty()) throw_validation("cannot cluster zero windows");
    cfg.validate();
    std::vector<std::size_t> all(windows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::mt19937_64 engine(cfg.seed);
    return build_node(windows, std::move(all), cfg, nullptr, engine);
}

namespace {

void clear_state_ids(ClusterNode& node) {
    node.state_id.reset();
    for (auto& child : node.children) clear_state_ids(*child);
}

void collect_states(ClusterNode& node, double threshold, std::vector<ClusterNode*>& states) {
    if (node.is_leaf() || node.mean_center_distance <= threshold) {
        states.push_back(&node);
        return;
    }
    for (auto& child : node.children) collect_states(*child, threshold, states);
}

}  // namespace

StateCut cut_to_states(ClusterNode& root, double threshold) {
    if (threshold < 0.0) throw_validation("cut threshold must be >= 0");
    clear_state_ids(root);
    std::vector<ClusterNode*> states;
    collect_states(root, threshold, states);

    // Ids follow each state's first window in time; windows are time-ordered.
    std::sort(states.begin(), states.end(), [](const ClusterNode* a, const ClusterNode* b) {
        return *std::min_element(a->members.begin(), a->members.end()) <
               *std::min_element(b->members.begin(), b->members.end());
    });

    StateCut cut;
    cut.state_count = static_cast<int>(states.size());
    cut.window_state.assign(root.members.size(), 0);
    for (std::size_t s = 0; s < states.size(); ++s) {
        states[s]->state_id = static_cast<int>(s + 1);
        for (std::size_t idx : states[s]->members) {
            cut.window_state.at(idx) = static_cast<int>(s + 1);
        }
    }
    return cut;
}

void StateSequence::validate() const {
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (!(entries[i - 1].first < entries[i].first)) {
            throw_validation("state timeline dates not strictly increasing at " +
                             entries[i].first.to_string());
        }
    }
}

StateSequence state_timeline(const StateCut& cut,
                             const std::vector<corr::CorrelationWindow>& windows) {
    if (cut.window_state.size() != windows.size()) {
        throw_validation("state mapping size does not match window count");
    }
    StateSequence seq;
    seq.entries.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (cut.window_state[i] <= 0) {
            throw_validation("window " + windows[i].label_date.to_string() +
                             " carries no state label");
        }
        seq.entries.emplace_back(windows[i].label_date, cut.window_state[i]);
    }
    std::sort(seq.entries.begin(), seq.entries.end());
    seq.validate();
    return seq;
}

}  // namespace marketstates::cluster
