#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "geometry.hpp"
#include "sign_pattern.hpp"

namespace koch {

/// Direct plane similarity z -> multiplier * z + offset.
struct Similarity {
    Complex multiplier;
    Complex offset;
};

inline Complex apply_similarity(const Similarity& map, Complex z) {
    return map.multiplier * z + map.offset;
}

/// The m+1 contractions S_j(z) = (p(j) + delta_j e^(2*pi*i*j/m) z) / p(m+1)
/// whose attractor the rescaled curves Q(n) converge to.
struct IfsSystem {
    SignPattern pattern;
    std::vector<Similarity> maps; // S_0, ..., S_m
    double ratio;                 // common contraction ratio 1/|p(m+1)|
};

/// Assembles the IFS; throws NotContractingError unless |p(m+1)| > 1.
inline IfsSystem build_ifs(const SignPattern& pattern) {
    const Complex p = detail::expansion_factor(pattern);
    const int m = pattern.m();
    std::vector<Similarity> maps;
    maps.reserve(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
        const Complex rotation = root_of_unity(m, j);
        maps.push_back({static_cast<double>(pattern.delta(j)) * rotation / p,
                        partial_sum(pattern, static_cast<std::uint64_t>(j)) / p});
    }
    return {pattern, std::move(maps), 1.0 / std::abs(p)};
}

namespace detail {

inline constexpr double junction_merge_tolerance = 1e-12;

// One subdivision round: W -> S_0(W) ... S_m(W) joined end to end.
// S_j(last) and S_{j+1}(first) coincide by construction; they are merged
// when within the junction tolerance and rejected loudly otherwise.
inline Polyline subdivide_once(const IfsSystem& system, const Polyline& line,
                               std::uint64_t vertex_cap) {
    const std::uint64_t segments = line.segment_count();
    const std::uint64_t pieces = system.maps.size();
    if (segments > (vertex_cap - 1) / pieces)
        throw std::length_error("level exceeds vertex cap");

    Polyline next;
    next.vertices.reserve(static_cast<std::size_t>(segments * pieces) + 1);
    for (std::size_t j = 0; j < system.maps.size(); ++j) {
        const Similarity& map = system.maps[j];
        std::size_t first = 0;
        if (!next.vertices.empty()) {
            const Complex junction = apply_similarity(map, line.vertices.front());
            if (std::abs(junction - next.vertices.back()) > junction_merge_tolerance)
                throw std::runtime_error("junction mismatch between pieces " +
                                         std::to_string(j - 1) + " and " +
                                         std::to_string(j));
            first = 1; // merge the duplicated junction vertex
        }
        for (std::size_t i = first; i < line.vertices.size(); ++i)
            next.vertices.push_back(apply_similarity(map, line.vertices[i]));
    }
    return next;
}

} // namespace detail

/// Level-n attractor approximation grown from the seed segment [0,1] by n
/// subdivision rounds; (m+1)^n + 1 vertices, same shape as polyline_Q(n).
inline Polyline iterate_ifs(const IfsSystem& system, unsigned level,
                            std::uint64_t vertex_cap = limits::max_polyline_vertices) {
    detail::power_checked(system.maps.size(), level, vertex_cap - 1);
    Polyline line{{Complex{0.0, 0.0}, Complex{1.0, 0.0}}};
    for (unsigned n = 0; n < level; ++n)
        line = detail::subdivide_once(system, line, vertex_cap);
    return line;
}

/// Verifies the exact self-similarity Q(n+1) = union_j S_j(Q(n)) by
/// comparing vertices of the two constructions. Metrics report the worst
/// vertex deviation.
inline CheckReport self_similarity_check(const SignPattern& pattern, unsigned level,
                                         double tolerance) {
    const IfsSystem system = build_ifs(pattern);
    const Polyline direct = polyline_Q(pattern, level + 1);
    const Polyline subdivided =
        detail::subdivide_once(system, polyline_Q(pattern, level),
                               limits::max_polyline_vertices);

    CheckReport report;
    if (direct.size() != subdivided.size()) {
        report.passed = false;
        report.add_metric("vertex_count_direct", static_cast<double>(direct.size()));
        report.add_metric("vertex_count_subdivided",
                          static_cast<double>(subdivided.size()));
        report.notes = "vertex counts disagree";
        return report;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
        worst = std::max(worst, std::abs(direct.vertices[i] - subdivided.vertices[i]));
    report.passed = worst <= tolerance;
    report.add_metric("max_deviation", worst);
    report.add_metric("tolerance", tolerance);
    report.add_metric("vertices", static_cast<double>(direct.size()));
    if (!report.passed)
        report.notes = "vertex deviation exceeds tolerance";
    return report;
}

/// Successive Hausdorff distances d_H(Q(n), Q(n+1)) for n = 0..max_level-1.
/// Their decay exposes the geometric convergence rate toward the attractor.
inline std::vector<double> convergence_diagnostics(const SignPattern& pattern,
                                                   unsigned max_level, double step) {
    if (max_level < 1)
        throw std::invalid_argument("convergence needs max_level >= 1");
    std::vector<double> distances;
    distances.reserve(max_level);
    Polyline previous = polyline_Q(pattern, 0);
    for (unsigned n = 1; n <= max_level; ++n) {
        Polyline current = polyline_Q(pattern, n);
        distances.push_back(hausdorff_distance(previous, current, step));
        previous = std::move(current);
    }
    return distances;
}

} // namespace koch
