#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "geometry.hpp"

namespace koch {
namespace polygon {

inline double cross(Complex origin, Complex a, Complex b) {
    return (a.real() - origin.real()) * (b.imag() - origin.imag()) -
           (a.imag() - origin.imag()) * (b.real() - origin.real());
}

/// Signed area, positive for counterclockwise vertex order.
inline double signed_area(const std::vector<Complex>& vertices) {
    double twice = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = vertices[i];
        const Complex b = vertices[(i + 1) % n];
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return twice / 2.0;
}

/// Convex and counterclockwise: every consecutive edge turn is a left turn
/// (up to `tolerance` slack for nearly collinear edges).
inline bool is_convex_ccw(const std::vector<Complex>& vertices, double tolerance = 1e-12) {
    const std::size_t n = vertices.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = vertices[i];
        const Complex b = vertices[(i + 1) % n];
        const Complex c = vertices[(i + 2) % n];
        if (cross(a, b, c) < -tolerance)
            return false;
    }
    return signed_area(vertices) > tolerance;
}

/// Minimum signed distance from `point` to the edges of a CCW convex
/// polygon; >= 0 exactly when the point lies inside or on the boundary.
inline double signed_containment_margin(Complex point, const std::vector<Complex>& hull) {
    double margin = std::numeric_limits<double>::infinity();
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex u = hull[i];
        const Complex v = hull[(i + 1) % n];
        margin = std::min(margin, cross(u, v, point) / std::abs(v - u));
    }
    return margin;
}

/// Sutherland-Hodgman intersection of convex polygons, with every clip
/// half-plane pulled inward by `inset`. The inset erodes zero-width contact
/// (shared edges, shared vertices) to the empty polygon instead of leaving
/// floating-point sliver polygons behind.
inline std::vector<Complex> clip_convex(const std::vector<Complex>& subject,
                                        const std::vector<Complex>& clip,
                                        double inset = 0.0) {
    std::vector<Complex> output = subject;
    const std::size_t n = clip.size();
    for (std::size_t i = 0; i < n && output.size() >= 3; ++i) {
        const Complex u = clip[i];
        const Complex v = clip[(i + 1) % n];
        const double edge_length = std::abs(v - u);
        auto inside_depth = [&](Complex z) {
            return cross(u, v, z) - inset * edge_length;
        };
        std::vector<Complex> input = std::move(output);
        output.clear();
        const std::size_t k = input.size();
        for (std::size_t j = 0; j < k; ++j) {
            const Complex a = input[j];
            const Complex b = input[(j + 1) % k];
            const double da = inside_depth(a);
            const double db = inside_depth(b);
            if (da >= 0.0) {
                output.push_back(a);
                if (db < 0.0)
                    output.push_back(a + (b - a) * (da / (da - db)));
            } else if (db >= 0.0) {
                output.push_back(a + (b - a) * (da / (da - db)));
            }
        }
    }
    if (output.size() < 3)
        output.clear();
    return output;
}

/// Area of the (inset-eroded) intersection of two convex polygons.
inline double overlap_area(const std::vector<Complex>& a, const std::vector<Complex>& b,
                           double inset = 0.0) {
    const std::vector<Complex> intersection = clip_convex(a, b, inset);
    if (intersection.empty())
        return 0.0;
    return std::abs(signed_area(intersection));
}

} // namespace polygon
} // namespace koch
