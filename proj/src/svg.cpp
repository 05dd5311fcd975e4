#include "marketstates/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace marketstates::svg {

namespace {

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string diverging_color(double value, double lo, double hi) {
    const double span = hi - lo;
    double t = span > 0.0 ? (value - lo) / span : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    // blue (33,102,172) -> white (247,247,247) -> red (178,24,43)
    double r, g, b;
    if (t < 0.5) {
        const double u = t / 0.5;
        r = 33 + (247 - 33) * u;
        g = 102 + (247 - 102) * u;
        b = 172 + (247 - 172) * u;
    } else {
        const double u = (t - 0.5) / 0.5;
        r = 247 + (178 - 247) * u;
        g = 247 + (24 - 247) * u;
        b = 247 + (43 - 247) * u;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", static_cast<int>(std::lround(r)),
                  static_cast<int>(std::lround(g)), static_cast<int>(std::lround(b)));
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void open_svg(std::ostringstream& out, double width, double height) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' '
        << fmt(height) << "\">\n";
}

}  // namespace

HeatmapStyle correlation_style(std::string title) {
    HeatmapStyle style;
    style.title = std::move(title);
    return style;
}

HeatmapStyle similarity_style(const Matrix& values, std::string title) {
    HeatmapStyle style;
    style.lo = 0.0;
    style.hi = 0.0;
    for (std::size_t e = 0; e < values.size(); ++e) {
        style.hi = std::max(style.hi, values.data()[e]);
    }
    style.title = std::move(title);
    return style;
}

std::string render_heatmap(const Matrix& values, const std::vector<std::string>& labels,
                           const HeatmapStyle& style,
                           const std::vector<states::SectorBlock>* blocks) {
    const std::size_t k = values.rows();
    if (k == 0 || values.cols() != k) throw_validation("heatmap needs a square matrix");
    if (!labels.empty() && labels.size() != k) {
        throw_validation("heatmap label count does not match matrix size");
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(values(i, j))) {
                const std::string row = labels.empty() ? std::to_string(i) : labels[i];
                const std::string col = labels.empty() ? std::to_string(j) : labels[j];
                throw_numeric("non-finite heatmap value at cell (" + row + ", " + col + ")");
            }
        }
    }

    double cell = style.cell;
    if (cell <= 0.0) {
        cell = std::clamp(960.0 / static_cast<double>(k), 2.0, 24.0);
    }
    const bool draw_labels = !labels.empty() && k <= 48;
    const double margin_left = draw_labels ? 64.0 : 8.0;
    const double margin_top = style.title.empty() ? (draw_labels ? 64.0 : 8.0)
                                                  : (draw_labels ? 84.0 : 28.0);
    const double width = margin_left + cell * static_cast<double>(k) + 8.0;
    const double height = margin_top + cell * static_cast<double>(k) + 8.0;

    std::ostringstream out;
    open_svg(out, width, height);
    if (!style.title.empty()) {
        out << "  <text x=\"" << fmt(margin_left) << "\" y=\"18\" font-family=\"sans-serif\""
            << " font-size=\"14\">" << escape_xml(style.title) << "</text>\n";
    }
    out << "  <g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out << "    <rect class=\"cell\" x=\""
                << fmt(margin_left + cell * static_cast<double>(j)) << "\" y=\""
                << fmt(margin_top + cell * static_cast<double>(i)) << "\" width=\""
                << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\""
                << diverging_color(values(i, j), style.lo, style.hi) << "\"/>\n";
        }
    }
    out << "  </g>\n";
    if (draw_labels) {
        const double font = std::min(10.0, cell);
        for (std::size_t i = 0; i < k; ++i) {
            out << "  <text class=\"row-label\" x=\"" << fmt(margin_left - 4.0) << "\" y=\""
                << fmt(margin_top + cell * (static_cast<double>(i) + 0.75)) << "\" font-family=\"sans-serif\""
                << " font-size=\"" << fmt(font) << "\" text-anchor=\"end\">"
                << escape_xml(labels[i]) << "</text>\n";
            out << "  <text class=\"col-label\" x=\"0\" y=\"0\" font-family=\"sans-serif\""
                << " font-size=\"" << fmt(font) << "\" text-anchor=\"start\" transform=\"translate("
                << fmt(margin_left + cell * (static_cast<double>(i) + 0.75)) << ','
                << fmt(margin_top - 4.0) << ") rotate(-90)\">" << escape_xml(labels[i])
                << "</text>\n";
        }
    }
    if (blocks != nullptr) {
        for (const states::SectorBlock& block : *blocks) {
            const double x = margin_left + cell * static_cast<double>(block.range.begin);
            const double y = margin_top + cell * static_cast<double>(block.range.begin);
            const double side = cell * static_cast<double>(block.range.length());
            out << "  <rect class=\"sector-block\" x=\"" << fmt(x) << "\" y=\"" << fmt(y)
                << "\" width=\"" << fmt(side) << "\" height=\"" << fmt(side)
                << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
            out << "  <text class=\"sector-label\" x=\"" << fmt(x + 2.0) << "\" y=\""
                << fmt(y - 2.0) << "\" font-family=\"sans-serif\" font-size=\"10\">"
                << escape_xml(block.sector) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

namespace {

struct TreeLayout {
    double x = 0.0;
    double y = 0.0;
};

double max_extent(const io::TreeNodeDoc& node, double x0) {
    double ext = x0;
    for (const io::TreeNodeDoc& child : node.children) {
        ext = std::max(ext, max_extent(child, x0 + child.branch_length));
    }
    return ext;
}

double layout_tree(const io::TreeNodeDoc& node, double x, double scale, double row_height,
                   std::size_t& next_leaf, std::ostringstream& out, double margin_left,
                   double margin_top) {
    std::vector<double> child_y;
    const double node_x = margin_left + x * scale;
    if (node.children.empty()) {
        const double y = margin_top + row_height * static_cast<double>(next_leaf++);
        std::string label = node.members.empty() ? std::string("?") : node.members.front();
        if (node.members.size() > 1) {
            label += " .. " + node.members.back() + " (" +
                     std::to_string(node.members.size()) + ")";
        }
        out << "  <text class=\"leaf\" x=\"" << fmt(node_x + 4.0) << "\" y=\""
            << fmt(y + 3.0) << "\" font-family=\"sans-serif\" font-size=\"10\">"
            << escape_xml(label) << "</text>\n";
        if (node.state_id) {
            out << "  <text class=\"state-label\" x=\"" << fmt(node_x + 4.0) << "\" y=\""
                << fmt(y - 8.0)
                << "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">"
                << *node.state_id << "</text>\n";
        }
        return y;
    }
    for (const io::TreeNodeDoc& child : node.children) {
        const double cx = x + child.branch_length;
        const double cy = layout_tree(child, cx, scale, row_height, next_leaf, out,
                                      margin_left, margin_top);
        child_y.push_back(cy);
        out << "  <path class=\"edge\" d=\"M " << fmt(node_x) << ' ' << fmt(cy) << " H "
            << fmt(margin_left + cx * scale) << "\" stroke=\"black\" fill=\"none\"/>\n";
    }
    const double y_lo = *std::min_element(child_y.begin(), child_y.end());
    const double y_hi = *std::max_element(child_y.begin(), child_y.end());
    out << "  <path class=\"joint\" d=\"M " << fmt(node_x) << ' ' << fmt(y_lo) << " V "
        << fmt(y_hi) << "\" stroke=\"black\" fill=\"none\"/>\n";
    const double y = 0.5 * (y_lo + y_hi);
    if (node.state_id) {
        out << "  <text class=\"state-label\" x=\"" << fmt(node_x + 2.0) << "\" y=\""
            << fmt(y - 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">"
            << *node.state_id << "</text>\n";
    }
    return y;
}

}  // namespace

std::string render_tree(const io::TreeNodeDoc& root) {
    const std::size_t leaves = root.leaf_count();
    const double row_height = 16.0;
    const double margin_left = 16.0;
    const double margin_top = 24.0;
    const double extent = max_extent(root, 0.0);
    const double plot_width = 640.0;
    const double scale = extent > 0.0 ? plot_width / extent : 1.0;
    const double width = margin_left + plot_width + 240.0;
    const double height = margin_top + row_height * static_cast<double>(leaves) + 16.0;

    std::ostringstream body;
    std::size_t next_leaf = 0;
    layout_tree(root, 0.0, scale, row_height, next_leaf, body, margin_left, margin_top);

    std::ostringstream out;
    open_svg(out, width, height);
    out << body.str();
    out << "</svg>\n";
    return out.str();
}

std::string render_timeline(const cluster::StateSequence& sequence) {
    if (sequence.entries.empty()) throw_validation("cannot render an empty timeline");
    int max_state = 1;
    for (const auto& [date, state] : sequence.entries) max_state = std::max(max_state, state);

    const double margin_left = 48.0;
    const double margin_top = 16.0;
    const double step_x = 12.0;
    const double step_y = 20.0;
    const std::size_t n = sequence.entries.size();
    const double width = margin_left + step_x * static_cast<double>(n) + 64.0;
    const double height =
        margin_top + step_y * static_cast<double>(max_state) + 48.0;
    auto x_of = [&](std::size_t i) {
        return margin_left + step_x * (static_cast<double>(i) + 0.5);
    };
    auto y_of = [&](int state) {
        return margin_top + step_y * static_cast<double>(max_state - state + 1);
    };

    std::ostringstream out;
    open_svg(out, width, height);
    for (int s = 1; s <= max_state; ++s) {
        out << "  <text class=\"axis\" x=\"" << fmt(margin_left - 8.0) << "\" y=\""
            << fmt(y_of(s) + 3.0)
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << s
            << "</text>\n";
    }
    out << "  <polyline class=\"steps\" fill=\"none\" stroke=\"steelblue\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out << ' ';
        out << fmt(x_of(i)) << ',' << fmt(y_of(sequence.entries[i].second));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << "  <circle class=\"pt\" cx=\"" << fmt(x_of(i)) << "\" cy=\""
            << fmt(y_of(sequence.entries[i].second)) << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
    }
    out << "  <text class=\"axis\" x=\"" << fmt(x_of(0)) << "\" y=\"" << fmt(height - 8.0)
        << "\" font-family=\"sans-serif\" font-size=\"10\">"
        << escape_xml(sequence.entries.front().first.to_string()) << "</text>\n";
    out << "  <text class=\"axis\" x=\"" << fmt(x_of(n - 1)) << "\" y=\"" << fmt(height - 8.0)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
        << escape_xml(sequence.entries.back().first.to_string()) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace marketstates::svg
