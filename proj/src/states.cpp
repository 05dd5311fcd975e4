#include "marketstates/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace marketstates::states {

const std::array<std::string, 10>& SectorMap::display_order() {
    static const std::array<std::string, 10> order = {"E",  "M", "I", "CD", "CS",
                                                      "H",  "F", "IT", "C", "U"};
    return order;
}

bool SectorMap::is_valid_code(const std::string& code) {
    const auto& order = display_order();
    return std::find(order.begin(), order.end(), code) != order.end();
}

void SectorMap::insert(const std::string& symbol, const std::string& code) {
    if (!is_valid_code(code)) {
        throw_validation("unknown sector code '" + code + "' for symbol '" + symbol + "'");
    }
    if (!map_.emplace(symbol, code).second) {
        throw_validation("symbol '" + symbol + "' mapped to a sector more than once");
    }
}

const std::string& SectorMap::sector_of(const std::string& symbol) const {
    auto it = map_.find(symbol);
    if (it == map_.end()) {
        throw_validation("symbol '" + symbol + "' is missing from the sector map");
    }
    return it->second;
}

bool SectorMap::contains(const std::string& symbol) const {
    return map_.count(symbol) != 0;
}

StateAverages state_average(const cluster::StateCut& cut,
                            const std::vector<corr::CorrelationWindow>& windows) {
    if (cut.window_state.size() != windows.size()) {
        throw_validation("state mapping size does not match window count");
    }
    std::vector<std::vector<std::size_t>> members(
        static_cast<std::size_t>(cut.state_count));
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const int s = cut.window_state[i];
        if (s < 1 || s > cut.state_count) {
            throw_validation("window " + std::to_string(i) + " has state id out of range");
        }
        members[static_cast<std::size_t>(s - 1)].push_back(i);
    }

    StateAverages out;
    for (int s = 0; s < cut.state_count; ++s) {
        const auto& m = members[static_cast<std::size_t>(s)];
        if (m.empty()) {
            throw_validation("state " + std::to_string(s + 1) + " has no member windows");
        }
        out.averages.push_back(corr::average_matrix(windows, m));
        out.counts.push_back(m.size());
    }
    return out;
}

SectorSorted sector_sort(const corr::CorrelationWindow& window, const SectorMap& map) {
    const std::size_t k = window.size();
    std::vector<std::size_t> sector_index(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::string& code = map.sector_of(window.symbols[i]);
        const auto& order = SectorMap::display_order();
        sector_index[i] = static_cast<std::size_t>(
            std::find(order.begin(), order.end(), code) - order.begin());
    }

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (sector_index[a] != sector_index[b]) return sector_index[a] < sector_index[b];
        return window.symbols[a] < window.symbols[b];
    });

    SectorSorted out;
    out.permutation = perm;
    out.window = window;
    out.window.symbols.clear();
    for (std::size_t i = 0; i < k; ++i) {
        out.window.symbols.push_back(window.symbols[perm[i]]);
        for (std::size_t j = 0; j < k; ++j) {
            out.window.values(i, j) = window.values(perm[i], perm[j]);
        }
    }

    std::size_t begin = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const bool last_of_block =
            i + 1 == k || sector_index[perm[i + 1]] != sector_index[perm[i]];
        if (last_of_block) {
            out.blocks.push_back(
                {SectorMap::display_order()[sector_index[perm[i]]], {begin, i + 1}});
            begin = i + 1;
        }
    }
    return out;
}

Matrix diff_to_overall(const corr::CorrelationWindow& state_avg,
                       const corr::CorrelationWindow& overall) {
    if (state_avg.symbols != overall.symbols) {
        throw_validation("difference of matrices over incompatible universes");
    }
    const std::size_t k = state_avg.size();
    Matrix diff(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            diff(i, j) = i == j ? 0.0 : state_avg.values(i, j) - overall.values(i, j);
        }
    }
    return diff;
}

std::uint64_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram coefficient_histogram(const corr::CorrelationWindow& window, std::size_t bins,
                                bool include_diagonal) {
    if (bins < 1) throw_validation("histogram needs at least 1 bin");
    Histogram h;
    h.source = window.label_date.to_string();
    h.bin_edges.reserve(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.bin_edges.push_back(-1.0 + static_cast<double>(b) * 2.0 / static_cast<double>(bins));
    }
    h.counts.assign(bins, 0);

    const std::size_t k = window.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = include_diagonal ? i : i + 1; j < k; ++j) {
            const double v = window.values(i, j);
            // Left-closed bins; the final bin also takes its right edge.
            auto bin = static_cast<std::size_t>(
                std::floor((v + 1.0) * static_cast<double>(bins) / 2.0));
            if (bin >= bins) bin = bins - 1;
            ++h.counts[bin];
        }
    }
    return h;
}

}  // namespace marketstates::states
