#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "lifmoran/errors.hpp"
#include "lifmoran/formats.hpp"

namespace lifmoran {

namespace {

constexpr double kCell = 24.0;
constexpr double kMargin = 8.0;
constexpr double kLegendWidth = 96.0;

std::string hex_color(const Palette& palette, double t) {
    const auto mix = [&](std::uint8_t lo, std::uint8_t hi) {
        const double v = static_cast<double>(lo) + t * (static_cast<double>(hi) - lo);
        return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
    };
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", mix(palette.low.r, palette.high.r),
                  mix(palette.low.g, palette.high.g), mix(palette.low.b, palette.high.b));
    return buffer;
}

std::string tick_label(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3g", v);
    return buffer;
}

void append_number(std::string& out, double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    out += buffer;
}

}  // namespace

std::string render_lattice_svg(std::span<const double> values, std::size_t rows,
                               std::size_t cols, const Palette& palette, bool legend) {
    if (rows * cols != values.size()) {
        throw DimensionMismatch("render_lattice_svg: " + std::to_string(values.size()) +
                                " values for a " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " grid");
    }
    if (values.empty()) throw DimensionMismatch("render_lattice_svg: empty grid");

    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    const double range = hi - lo;

    const double grid_w = kCell * static_cast<double>(cols);
    const double grid_h = kCell * static_cast<double>(rows);
    const double width = kMargin * 2 + grid_w + (legend ? kLegendWidth : 0.0);
    const double height = kMargin * 2 + grid_h;

    std::string svg;
    svg.reserve(values.size() * 80 + 1024);
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    append_number(svg, width);
    svg += "\" height=\"";
    append_number(svg, height);
    svg += "\" viewBox=\"0 0 ";
    append_number(svg, width);
    svg += " ";
    append_number(svg, height);
    svg += "\">\n";

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = values[r * cols + c];
            // Zero-range data maps everything to the low endpoint.
            const double t = range > 0.0 ? (v - lo) / range : 0.0;
            svg += "  <rect x=\"";
            append_number(svg, kMargin + kCell * static_cast<double>(c));
            svg += "\" y=\"";
            append_number(svg, kMargin + kCell * static_cast<double>(r));
            svg += "\" width=\"";
            append_number(svg, kCell);
            svg += "\" height=\"";
            append_number(svg, kCell);
            svg += "\" fill=\"" + hex_color(palette, t) + "\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
        }
    }

    if (legend) {
        const double bar_x = kMargin + grid_w + 24.0;
        const double bar_w = 14.0;
        const std::size_t ticks = range > 0.0 ? 5 : 1;
        const std::size_t swatches = 32;
        const double bar_h = grid_h;
        for (std::size_t s = 0; s < swatches; ++s) {
            // Swatch 0 at the bottom carries the low endpoint.
            const double t = static_cast<double>(s) / static_cast<double>(swatches - 1);
            svg += "  <rect x=\"";
            append_number(svg, bar_x);
            svg += "\" y=\"";
            append_number(svg, kMargin + bar_h * (1.0 - (static_cast<double>(s) + 1.0) / swatches));
            svg += "\" width=\"";
            append_number(svg, bar_w);
            svg += "\" height=\"";
            append_number(svg, bar_h / swatches + 0.5);
            svg += "\" fill=\"" + hex_color(palette, range > 0.0 ? t : 0.0) + "\"/>\n";
        }
        for (std::size_t k = 0; k < ticks; ++k) {
            const double t = ticks > 1 ? static_cast<double>(k) / static_cast<double>(ticks - 1)
                                       : 0.0;
            const double value = lo + t * range;
            svg += "  <text x=\"";
            append_number(svg, bar_x + bar_w + 6.0);
            svg += "\" y=\"";
            append_number(svg, kMargin + bar_h * (1.0 - t) + 4.0);
            svg += "\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(value) +
                   "</text>\n";
        }
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace lifmoran
