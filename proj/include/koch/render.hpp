#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace koch {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

/// CSV with header "re,im" and one row per vertex, round-trippable.
inline std::string export_csv(const Polyline& line) {
    if (line.vertices.size() < 2)
        throw std::invalid_argument("polyline needs at least 2 vertices");
    std::string out = "re,im\n";
    for (const Complex& v : line.vertices) {
        out += format_double(v.real());
        out += ',';
        out += format_double(v.imag());
        out += '\n';
    }
    return out;
}

struct RenderStyle {
    int canvas_width = 800;
    int canvas_height = 600;
    double margin = 0.05;        // fraction of the canvas kept clear, per side
    double stroke_width = 1.0;
    bool draw_open_sets = false; // draw the polygon overlays passed in
    bool dashed_previous = false; // dash every curve except the last
};

namespace detail {

inline void append_fixed(std::string& out, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    out += buffer;
}

} // namespace detail

/// Standalone SVG 1.1 document. Every polyline becomes one path element
/// with its vertex count preserved; polygons (open-set overlays) are drawn
/// underneath. Coordinates are mapped uniformly onto the canvas with the
/// y axis flipped to screen convention, 6 decimal places.
inline std::string render_svg(const std::vector<Polyline>& curves,
                              const std::vector<std::vector<Complex>>& polygons,
                              const RenderStyle& style) {
    if (style.canvas_width < 64 || style.canvas_height < 64)
        throw std::invalid_argument("canvas must be at least 64x64");
    if (!(style.margin >= 0.0 && style.margin < 0.4))
        throw std::invalid_argument("margin fraction must lie in [0, 0.4)");
    if (!(style.stroke_width > 0.0))
        throw std::invalid_argument("stroke width must be positive");
    if (curves.empty())
        throw std::invalid_argument("nothing to render");
    for (const Polyline& c : curves)
        detail::require_finite(c);

    double min_x = curves[0].vertices[0].real(), max_x = min_x;
    double min_y = curves[0].vertices[0].imag(), max_y = min_y;
    auto grow = [&](Complex v) {
        min_x = std::min(min_x, v.real());
        max_x = std::max(max_x, v.real());
        min_y = std::min(min_y, v.imag());
        max_y = std::max(max_y, v.imag());
    };
    for (const Polyline& c : curves)
        for (Complex v : c.vertices)
            grow(v);
    if (style.draw_open_sets)
        for (const auto& poly : polygons)
            for (Complex v : poly)
                grow(v);

    const double avail_w =
        style.canvas_width * (1.0 - 2.0 * style.margin);
    const double avail_h =
        style.canvas_height * (1.0 - 2.0 * style.margin);
    const double span_x = max_x - min_x;
    const double span_y = max_y - min_y;
    double scale = std::numeric_limits<double>::infinity();
    if (span_x > 0.0)
        scale = std::min(scale, avail_w / span_x);
    if (span_y > 0.0)
        scale = std::min(scale, avail_h / span_y);
    if (!std::isfinite(scale))
        scale = 1.0; // single point; any scale renders it centered
    const double offset_x =
        (style.canvas_width - scale * span_x) / 2.0 - scale * min_x;
    const double offset_y =
        (style.canvas_height - scale * span_y) / 2.0 + scale * max_y;
    auto to_screen = [&](Complex v) {
        return Complex{offset_x + scale * v.real(), offset_y - scale * v.imag()};
    };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(style.canvas_width) + "\" height=\"" +
           std::to_string(style.canvas_height) + "\" viewBox=\"0 0 " +
           std::to_string(style.canvas_width) + " " +
           std::to_string(style.canvas_height) + "\">\n";

    if (style.draw_open_sets) {
        for (const auto& poly : polygons) {
            svg += "  <polygon points=\"";
            for (std::size_t i = 0; i < poly.size(); ++i) {
                if (i > 0)
                    svg += ' ';
                const Complex s = to_screen(poly[i]);
                detail::append_fixed(svg, s.real());
                svg += ',';
                detail::append_fixed(svg, s.imag());
            }
            svg += "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"";
            detail::append_fixed(svg, style.stroke_width * 0.75);
            svg += "\"/>\n";
        }
    }

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const bool dashed = style.dashed_previous && c + 1 < curves.size();
        svg += "  <path d=\"";
        for (std::size_t i = 0; i < curves[c].vertices.size(); ++i) {
            svg += (i == 0) ? "M " : " L ";
            const Complex s = to_screen(curves[c].vertices[i]);
            detail::append_fixed(svg, s.real());
            svg += ' ';
            detail::append_fixed(svg, s.imag());
        }
        svg += "\" fill=\"none\" stroke=\"";
        svg += dashed ? "#777777" : "#1a1a1a";
        svg += "\" stroke-width=\"";
        detail::append_fixed(svg, style.stroke_width);
        svg += "\"";
        if (dashed)
            svg += " stroke-dasharray=\"6 4\"";
        svg += "/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace koch
