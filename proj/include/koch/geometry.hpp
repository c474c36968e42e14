#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "sign_pattern.hpp"

namespace koch {

using Complex = std::complex<double>;

/// Open polygonal chain; vertices in drawing order.
struct Polyline {
    std::vector<Complex> vertices;

    std::size_t size() const noexcept { return vertices.size(); }
    std::size_t segment_count() const noexcept {
        return vertices.empty() ? 0 : vertices.size() - 1;
    }
};

/// e^(2*pi*i*k/m) with k reduced mod m first. Quarter turns are returned
/// exactly so that axis-aligned patterns stay exact in double arithmetic.
inline Complex root_of_unity(int m, std::int64_t k) {
    if (m < 1)
        throw std::invalid_argument("root_of_unity needs m >= 1");
    std::int64_t r = k % m;
    if (r < 0)
        r += m;
    const std::int64_t quarters = 4 * r;
    if (quarters % m == 0) {
        switch (quarters / m) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / m;
    return {std::cos(angle), std::sin(angle)};
}

namespace detail {

inline std::vector<Complex> unit_root_table(int m) {
    std::vector<Complex> table;
    table.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        table.push_back(root_of_unity(m, k));
    return table;
}

// z^n by repeated multiplication; n is a small exact integer exponent.
inline Complex pow_int(Complex z, unsigned n) {
    Complex result{1.0, 0.0};
    for (unsigned i = 0; i < n; ++i)
        result *= z;
    return result;
}

// (m+1)^level with a cap guard; throws instead of overflowing.
inline std::uint64_t power_checked(std::uint64_t base, unsigned exponent, std::uint64_t cap) {
    std::uint64_t value = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (value > cap / base)
            throw std::length_error("level exceeds vertex cap");
        value *= base;
    }
    return value;
}

} // namespace detail

/// p(n) = sum_{k<n} delta_k e^(2*pi*i*k/m); p(0) = 0.
inline Complex partial_sum(const SignPattern& pattern, std::uint64_t n) {
    const auto roots = detail::unit_root_table(pattern.m());
    const auto m = static_cast<std::uint64_t>(pattern.m());
    Complex sum{0.0, 0.0};
    for (std::uint64_t k = 0; k < n; ++k) {
        const double sign = delta_at(pattern, k);
        sum += sign * roots[static_cast<std::size_t>(k % m)];
    }
    return sum;
}

/// Polyline through the partial sums p(0), ..., p(steps). Matches
/// partial_sum vertex for vertex (same summation order, exact signs).
inline Polyline partial_sum_walk(const SignPattern& pattern, std::uint64_t steps,
                                 std::uint64_t vertex_cap = limits::max_polyline_vertices) {
    if (steps >= vertex_cap)
        throw std::length_error("walk exceeds vertex cap");
    const auto signs = sequence_prefix(pattern, std::max<std::uint64_t>(steps, 1));
    const auto roots = detail::unit_root_table(pattern.m());
    const auto m = static_cast<std::uint64_t>(pattern.m());

    Polyline line;
    line.vertices.reserve(static_cast<std::size_t>(steps) + 1);
    Complex sum{0.0, 0.0};
    line.vertices.push_back(sum);
    for (std::uint64_t k = 0; k < steps; ++k) {
        const double sign = signs[static_cast<std::size_t>(k)];
        sum += sign * roots[static_cast<std::size_t>(k % m)];
        line.vertices.push_back(sum);
    }
    return line;
}

/// Level-n polygonal approximation P(n): vertices p(0), ..., p((m+1)^n),
/// i.e. (m+1)^n + 1 vertices joined in order.
inline Polyline polyline_P(const SignPattern& pattern, unsigned level,
                           std::uint64_t vertex_cap = limits::max_polyline_vertices) {
    const auto base = static_cast<std::uint64_t>(pattern.m()) + 1;
    const std::uint64_t steps = detail::power_checked(base, level, vertex_cap - 1);
    return partial_sum_walk(pattern, steps, vertex_cap);
}

namespace detail {

inline constexpr double contraction_margin = 1e-12;

// p(m+1), guarded by the expansion hypothesis |p(m+1)| > 1. The margin
// keeps the all-plus pattern (p = 1 exactly) on the rejected side of the
// test under floating-point noise.
inline Complex expansion_factor(const SignPattern& pattern) {
    const Complex p = partial_sum(pattern, static_cast<std::uint64_t>(pattern.m()) + 1);
    if (std::abs(p) <= 1.0 + contraction_margin)
        throw NotContractingError(std::abs(p));
    return p;
}

} // namespace detail

/// Rescaled approximation Q(n) = p(m+1)^(-n) P(n). Endpoints are 0 and 1
/// up to accumulated rounding. Requires |p(m+1)| > 1.
inline Polyline polyline_Q(const SignPattern& pattern, unsigned level,
                           std::uint64_t vertex_cap = limits::max_polyline_vertices) {
    const Complex p = detail::expansion_factor(pattern);
    Polyline line = polyline_P(pattern, level, vertex_cap);
    const Complex scale = detail::pow_int(p, level);
    for (Complex& v : line.vertices)
        v /= scale;
    return line;
}

namespace detail {

inline double point_segment_distance(Complex point, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0)
        return std::abs(point - a);
    double t = ((point.real() - a.real()) * ab.real() +
                (point.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(point - (a + t * ab));
}

inline double point_polyline_distance(Complex point, const Polyline& line) {
    double best = std::abs(point - line.vertices.front());
    for (std::size_t i = 0; i + 1 < line.vertices.size(); ++i)
        best = std::min(best, point_segment_distance(point, line.vertices[i],
                                                     line.vertices[i + 1]));
    return best;
}

inline void require_finite(const Polyline& line) {
    if (line.vertices.size() < 2)
        throw std::invalid_argument("polyline needs at least 2 vertices");
    for (const Complex& v : line.vertices)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("polyline has non-finite vertex");
}

// max over samples of `from` (spaced <= step along each segment) of the
// exact distance to `to`. Sampling only coarsens the maximizing point, so
// the directed estimate is within `step` of the true directed distance.
inline double directed_hausdorff(const Polyline& from, const Polyline& to, double step) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < from.vertices.size(); ++i) {
        const Complex a = from.vertices[i];
        const Complex b = from.vertices[i + 1];
        const double length = std::abs(b - a);
        const auto pieces = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(length / step)));
        for (std::uint64_t s = 0; s <= pieces; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(pieces);
            worst = std::max(worst, point_polyline_distance(a + t * (b - a), to));
        }
    }
    return worst;
}

} // namespace detail

/// Symmetric Hausdorff distance estimate between two polylines, sampled at
/// spacing <= step with exact point-to-segment distances. The estimate is
/// within `step` of the true value.
inline double hausdorff_distance(const Polyline& a, const Polyline& b, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("hausdorff step must be positive");
    detail::require_finite(a);
    detail::require_finite(b);
    return std::max(detail::directed_hausdorff(a, b, step),
                    detail::directed_hausdorff(b, a, step));
}

/// area(eps-neighborhood of P(level)) / (m+1)^level, with the neighborhood
/// area measured by counting pixel centers within eps of the polyline on a
/// resolution x resolution grid over the eps-inflated bounding box.
inline double epsilon_area_ratio(const SignPattern& pattern, unsigned level,
                                 double epsilon, int resolution) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    if (resolution < 64)
        throw std::invalid_argument("resolution must be at least 64");
    const Polyline line = polyline_P(pattern, level);

    double min_x = line.vertices.front().real(), max_x = min_x;
    double min_y = line.vertices.front().imag(), max_y = min_y;
    for (const Complex& v : line.vertices) {
        min_x = std::min(min_x, v.real());
        max_x = std::max(max_x, v.real());
        min_y = std::min(min_y, v.imag());
        max_y = std::max(max_y, v.imag());
    }
    min_x -= epsilon;
    max_x += epsilon;
    min_y -= epsilon;
    max_y += epsilon;

    const auto res = static_cast<std::size_t>(resolution);
    const double px = (max_x - min_x) / resolution;
    const double py = (max_y - min_y) / resolution;
    std::vector<bool> covered(res * res, false);

    // Only pixels inside a segment's inflated bounding box can be covered
    // by that segment, so each segment touches a small pixel window.
    for (std::size_t i = 0; i + 1 < line.vertices.size(); ++i) {
        const Complex a = line.vertices[i];
        const Complex b = line.vertices[i + 1];
        const double lo_x = std::min(a.real(), b.real()) - epsilon;
        const double hi_x = std::max(a.real(), b.real()) + epsilon;
        const double lo_y = std::min(a.imag(), b.imag()) - epsilon;
        const double hi_y = std::max(a.imag(), b.imag()) + epsilon;
        const auto gx0 = static_cast<std::size_t>(
            std::clamp(std::floor((lo_x - min_x) / px) - 1.0, 0.0,
                       static_cast<double>(resolution - 1)));
        const auto gx1 = static_cast<std::size_t>(
            std::clamp(std::ceil((hi_x - min_x) / px) + 1.0, 0.0,
                       static_cast<double>(resolution - 1)));
        const auto gy0 = static_cast<std::size_t>(
            std::clamp(std::floor((lo_y - min_y) / py) - 1.0, 0.0,
                       static_cast<double>(resolution - 1)));
        const auto gy1 = static_cast<std::size_t>(
            std::clamp(std::ceil((hi_y - min_y) / py) + 1.0, 0.0,
                       static_cast<double>(resolution - 1)));
        for (std::size_t gy = gy0; gy <= gy1; ++gy) {
            const double cy = min_y + (static_cast<double>(gy) + 0.5) * py;
            for (std::size_t gx = gx0; gx <= gx1; ++gx) {
                if (covered[gy * res + gx])
                    continue;
                const double cx = min_x + (static_cast<double>(gx) + 0.5) * px;
                if (detail::point_segment_distance({cx, cy}, a, b) < epsilon)
                    covered[gy * res + gx] = true;
            }
        }
    }

    const auto count = static_cast<double>(
        std::count(covered.begin(), covered.end(), true));
    const double scale = std::pow(static_cast<double>(pattern.m() + 1),
                                  static_cast<double>(level));
    return count * px * py / scale;
}

} // namespace koch
