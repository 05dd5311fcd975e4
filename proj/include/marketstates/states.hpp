#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "marketstates/cluster.hpp"
#include "marketstates/corr.hpp"

namespace marketstates::states {

// Symbol -> GICS sector code. Matrices are displayed with sectors grouped
// in the fixed order below, so the branches form blocks on the diagonal.
class SectorMap {
public:
    // E, M, I, CD, CS, H, F, IT, C, U
    static const std::array<std::string, 10>& display_order();
    static bool is_valid_code(const std::string& code);

    void insert(const std::string& symbol, const std::string& code);
    const std::string& sector_of(const std::string& symbol) const;  // throws if unmapped
    bool contains(const std::string& symbol) const;
    std::size_t size() const noexcept { return map_.size(); }

private:
    std::unordered_map<std::string, std::string> map_;
};

struct StateAverages {
    std::vector<corr::CorrelationWindow> averages;  // index s-1 holds state s
    std::vector<std::size_t> counts;                // member windows per state
};

// Elementwise mean of each state's member windows.
StateAverages state_average(const cluster::StateCut& cut,
                            const std::vector<corr::CorrelationWindow>& windows);

struct SectorBlock {
    std::string sector;
    IndexRange range;  // rows/columns of the permuted matrix
};

struct SectorSorted {
    corr::CorrelationWindow window;
    std::vector<SectorBlock> blocks;
    std::vector<std::size_t> permutation;  // permuted index -> original index
};

// Permutes rows and columns so symbols group by sector in display order,
// alphabetically within each sector. Every symbol must be mapped.
SectorSorted sector_sort(const corr::CorrelationWindow& window, const SectorMap& map);

// state_avg - overall, elementwise, with an exactly zero diagonal.
Matrix diff_to_overall(const corr::CorrelationWindow& state_avg,
                       const corr::CorrelationWindow& overall);

struct Histogram {
    std::vector<double> bin_edges;      // bins+1 edges spanning [-1, 1]
    std::vector<std::uint64_t> counts;  // length bins
    std::string source;                 // window label or state id

    std::uint64_t total() const noexcept;
};

// Counts correlation coefficients into equal-width bins over [-1, 1].
// By default only the strict upper triangle is counted (each pair once);
// the final bin is closed on the right.
Histogram coefficient_histogram(const corr::CorrelationWindow& window, std::size_t bins,
                                bool include_diagonal = false);

}  // namespace marketstates::states
