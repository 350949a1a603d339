#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "seqbench/sweep.hpp"
#include "seqbench/units.hpp"

namespace seqbench {

namespace detail {

// Three-stop ramp from deep blue through teal to yellow; t in [0,1].
inline std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    double r, g, b;
    if (t < 0.5) {
        const double u = t * 2;
        r = 26 + u * (38 - 26);
        g = 35 + u * (148 - 35);
        b = 126 + u * (148 - 126);
    } else {
        const double u = (t - 0.5) * 2;
        r = 38 + u * (253 - 38);
        g = 148 + u * (231 - 148);
        b = 148 + u * (37 - 148);
    }
    char buf[10];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(r), static_cast<int>(g), static_cast<int>(b));
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct HeatGeometry {
    static constexpr int cell_w = 72, cell_h = 26, left = 90, top = 58, pad = 14, foot = 46;
};

// One mode's grid, drawn with its own origin at (0, y0). Returns the
// section height so sections can stack.
inline int render_heat_section(std::ostringstream& o, const std::vector<const ResultRow*>& rows,
                               const std::string& title, int y0) {
    const HeatGeometry g;
    std::vector<double> depths;
    std::vector<std::uint64_t> blocks;
    for (const ResultRow* r : rows) {
        if (std::find(depths.begin(), depths.end(), r->depth) == depths.end())
            depths.push_back(r->depth);
        if (std::find(blocks.begin(), blocks.end(), r->block_bytes) == blocks.end())
            blocks.push_back(r->block_bytes);
    }
    std::sort(depths.begin(), depths.end());
    std::sort(blocks.begin(), blocks.end());

    double lo = 0, hi = 0;
    bool any = false;
    for (const ResultRow* r : rows) {
        if (!r->error.empty()) continue;
        if (!any) {
            lo = hi = r->rate_mbps;
            any = true;
        }
        lo = std::min(lo, r->rate_mbps);
        hi = std::max(hi, r->rate_mbps);
    }

    const int grid_w = g.cell_w * static_cast<int>(depths.size());
    const int grid_h = g.cell_h * static_cast<int>(blocks.size());

    o << "<text x=\"" << g.left << "\" y=\"" << y0 + 20
      << "\" font-size=\"14\" font-weight=\"bold\">" << xml_escape(title) << "</text>\n";
    o << "<text x=\"" << g.left + grid_w / 2 << "\" y=\"" << y0 + g.top - 22
      << "\" text-anchor=\"middle\">queue depth</text>\n";

    for (std::size_t x = 0; x < depths.size(); ++x)
        o << "<text x=\"" << g.left + static_cast<int>(x) * g.cell_w + g.cell_w / 2 << "\" y=\""
          << y0 + g.top - 6 << "\" text-anchor=\"middle\">" << fmt_g(depths[x]) << "</text>\n";
    for (std::size_t y = 0; y < blocks.size(); ++y)
        o << "<text x=\"" << g.left - 8 << "\" y=\""
          << y0 + g.top + static_cast<int>(y) * g.cell_h + g.cell_h / 2 + 4
          << "\" text-anchor=\"end\">" << format_size(blocks[y]) << "</text>\n";

    for (const ResultRow* r : rows) {
        const auto xi = std::find(depths.begin(), depths.end(), r->depth) - depths.begin();
        const auto yi = std::find(blocks.begin(), blocks.end(), r->block_bytes) - blocks.begin();
        const int x = g.left + static_cast<int>(xi) * g.cell_w;
        const int y = y0 + g.top + static_cast<int>(yi) * g.cell_h;
        std::string fill = "#bbbbbb";
        std::string label = "-";
        if (r->error.empty()) {
            const double t = hi > lo ? (r->rate_mbps - lo) / (hi - lo) : 1.0;
            fill = ramp_color(t);
            label = fmt_tenth(r->rate_mbps);
        }
        o << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << g.cell_w << "\" height=\""
          << g.cell_h << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
        o << "<text x=\"" << x + g.cell_w / 2 << "\" y=\"" << y + g.cell_h / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"white\">" << label << "</text>\n";
    }

    if (any) {
        o << "<text x=\"" << g.left << "\" y=\"" << y0 + g.top + grid_h + 24 << "\">"
          << fmt_tenth(lo) << " MB/s</text>\n";
        for (int i = 0; i < 40; ++i)
            o << "<rect x=\"" << g.left + 70 + i * 3 << "\" y=\"" << y0 + g.top + grid_h + 14
              << "\" width=\"3\" height=\"12\" fill=\"" << ramp_color(i / 39.0) << "\"/>\n";
        o << "<text x=\"" << g.left + 70 + 126 << "\" y=\"" << y0 + g.top + grid_h + 24 << "\">"
          << fmt_tenth(hi) << " MB/s</text>\n";
    }
    return g.top + grid_h + g.foot;
}

}  // namespace detail

// Renders rate surfaces as a standalone SVG heatmap: queue depth across,
// block size down, one shaded cell per measurement with the rate printed
// inside, one stacked grid per direction found in the rows. Cells that
// errored come out gray.
inline std::string render_heatmap_svg(const std::vector<ResultRow>& rows,
                                      const std::string& title) {
    const detail::HeatGeometry g;
    int width = g.left + g.pad;
    int height = 0;
    std::ostringstream body;
    for (Mode mode : {Mode::read, Mode::write}) {
        std::vector<const ResultRow*> subset;
        std::vector<double> depths;
        for (const ResultRow& r : rows) {
            if (r.mode != mode) continue;
            subset.push_back(&r);
            if (std::find(depths.begin(), depths.end(), r.depth) == depths.end())
                depths.push_back(r.depth);
        }
        if (subset.empty()) continue;
        width = std::max(width, g.left + g.cell_w * static_cast<int>(depths.size()) + g.pad);
        width = std::max(width, g.left + 70 + 40 * 3 + 90);  // legend strip
        height += detail::render_heat_section(body, subset,
                                              title + " (" + to_string(mode) + ")", height);
    }
    if (height == 0) height = 40;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    o << body.str();
    o << "</svg>\n";
    return o.str();
}

}  // namespace seqbench
