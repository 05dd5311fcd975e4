#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marketstates/cluster.hpp"
#include "marketstates/core.hpp"
#include "marketstates/io.hpp"
#include "marketstates/states.hpp"

namespace marketstates::svg {

// Diverging blue-white-red scale over [lo, hi].
struct HeatmapStyle {
    double lo = -1.0;
    double hi = 1.0;
    double cell = 0.0;  // 0: choose from the matrix size
    std::string title;
};

HeatmapStyle correlation_style(std::string title = {});
// zeta matrices span [0, observed max].
HeatmapStyle similarity_style(const Matrix& values, std::string title = {});

// One rect per cell (class "cell"). Sector blocks, when given, are outlined
// along the diagonal. Non-finite entries raise an error naming the cell.
std::string render_heatmap(const Matrix& values, const std::vector<std::string>& labels,
                           const HeatmapStyle& style,
                           const std::vector<states::SectorBlock>* blocks = nullptr);

// Dendrogram with the horizontal extent of each edge proportional to
// branch_length; one text node of class "leaf" per leaf.
std::string render_tree(const io::TreeNodeDoc& root);

// Step plot of the state id over time.
std::string render_timeline(const cluster::StateSequence& sequence);

}  // namespace marketstates::svg
