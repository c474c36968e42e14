#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "geometry.hpp"
#include "ifs.hpp"
#include "polygon.hpp"
#include "sign_pattern.hpp"

namespace koch {

/// Candidate open set for the separation condition: a convex polygon with
/// 3 or 4 counterclockwise vertices containing the segment [0,1].
struct OpenSetPolygon {
    std::vector<Complex> vertices;
};

/// The symmetric family delta_i = +1 for i <= floor(m/4) or i >= m - floor(m/4),
/// delta_i = -1 in between. It keeps p(m+1) real in [3, m+1].
inline SignPattern corollary_pattern(int m) {
    if (m < 2)
        throw std::invalid_argument("corollary pattern needs m >= 2");
    const int quarter = m / 4;
    std::vector<int> signs;
    signs.reserve(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i)
        signs.push_back((i <= quarter || i >= m - quarter) ? 1 : -1);
    return make_pattern(m, signs);
}

/// Checks that p(m+1) is real with Re p(m+1) in [3, m+1] (within tolerance).
/// The claim is proved for corollary patterns; other patterns are checked
/// anyway and marked as outside the proved regime.
inline CheckReport realness_check(const SignPattern& pattern, double tolerance) {
    const Complex p =
        partial_sum(pattern, static_cast<std::uint64_t>(pattern.m()) + 1);
    CheckReport report;
    report.add_metric("re", p.real());
    report.add_metric("im", p.imag());
    report.add_metric("tolerance", tolerance);
    const double upper = static_cast<double>(pattern.m()) + 1.0;
    report.passed = std::abs(p.imag()) <= tolerance &&
                    p.real() >= 3.0 - tolerance && p.real() <= upper + tolerance;
    if (pattern.m() < 2 || !(pattern == corollary_pattern(pattern.m())))
        report.notes = "pattern is outside the proved regime; result is empirical";
    return report;
}

/// Residue-dependent facts about the half partial sum of the corollary
/// pattern (h = m/2 for even m, (m+1)/2 for odd m):
///   m = 0 mod 4: Im p(h) = 1      m = 1 mod 4: Im p(h) >= 0
///   m = 2 mod 4: Im p(h) = 0      m = 3 mod 4: Im p(h) < 0
inline CheckReport imaginary_part_lemmas(int m) {
    if (m < 4)
        throw std::invalid_argument("imaginary part lemmas need m >= 4");
    constexpr double tolerance = 1e-9;
    const SignPattern pattern = corollary_pattern(m);
    const auto half = static_cast<std::uint64_t>(m % 2 == 0 ? m / 2 : (m + 1) / 2);
    const double im = partial_sum(pattern, half).imag();

    CheckReport report;
    report.add_metric("residue", static_cast<double>(m % 4));
    report.add_metric("half_index", static_cast<double>(half));
    report.add_metric("im", im);
    switch (m % 4) {
    case 0:
        report.passed = std::abs(im - 1.0) <= tolerance;
        report.notes = "expected Im p(m/2) = 1";
        break;
    case 1:
        report.passed = im >= -tolerance;
        report.notes = "expected Im p((m+1)/2) >= 0";
        break;
    case 2:
        report.passed = std::abs(im) <= tolerance;
        report.notes = "expected Im p(m/2) = 0";
        break;
    default:
        report.passed = im < 0.0;
        report.notes = "expected Im p((m+1)/2) < 0";
        break;
    }
    return report;
}

/// Open set for the corollary pattern of a given m:
///   m = 2: unit square. m = 3: triangle dipping below the base segment.
///   m >= 4, m = 0,1,2 mod 4: isosceles triangle over the base [0,1] with
///     apex height b_m / (2 a_m), where a_m + i b_m sums the first
///     floor(m/4)+1 directions.
///   m = 3 mod 4: quadrilateral adding the below-base vertex (1/2, -c_m),
///     c_m = -Im p((m+1)/2) / p(m+1).
inline OpenSetPolygon open_set(int m) {
    if (m < 2)
        throw std::invalid_argument("open set construction needs m >= 2");
    if (m == 2)
        return {{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    if (m == 3) {
        const double dip = 1.0 / (2.0 * std::sqrt(3.0));
        return {{{0.0, 0.0}, {0.5, -dip}, {1.0, 0.0}}};
    }

    const int quarter = m / 4;
    double a = 0.0;
    double b = 0.0;
    for (int k = 0; k <= quarter; ++k) {
        const Complex direction = root_of_unity(m, k);
        a += direction.real();
        b += direction.imag();
    }
    const Complex apex{0.5, b / (2.0 * a)};

    if (m % 4 != 3)
        return {{{0.0, 0.0}, {1.0, 0.0}, apex}};

    const SignPattern pattern = corollary_pattern(m);
    const Complex p =
        partial_sum(pattern, static_cast<std::uint64_t>(m) + 1); // real by the lemmas
    const auto half = static_cast<std::uint64_t>((m + 1) / 2);
    const double dip = -partial_sum(pattern, half).imag() / p.real();
    return {{{0.0, 0.0}, {0.5, -dip}, {1.0, 0.0}, apex}};
}

/// Open set condition test: each S_j maps the polygon into it, and distinct
/// images have essentially disjoint interiors. Containment is evaluated on
/// image vertices (enough for convex polygons); interior overlap is the
/// clipped intersection area, with closure-only contact eroded away.
inline CheckReport osc_check(const SignPattern& pattern, const OpenSetPolygon& candidate,
                             double tolerance) {
    if (!polygon::is_convex_ccw(candidate.vertices))
        throw std::invalid_argument("open set polygon must be convex, "
                                    "counterclockwise, and nondegenerate");
    const IfsSystem system = build_ifs(pattern);

    std::vector<std::vector<Complex>> images;
    images.reserve(system.maps.size());
    for (const Similarity& map : system.maps) {
        std::vector<Complex> image;
        image.reserve(candidate.vertices.size());
        for (Complex v : candidate.vertices)
            image.push_back(apply_similarity(map, v));
        images.push_back(std::move(image));
    }

    double containment = std::numeric_limits<double>::infinity();
    for (const auto& image : images)
        for (Complex v : image)
            containment =
                std::min(containment, polygon::signed_containment_margin(v, candidate.vertices));

    constexpr double contact_inset = 1e-12;
    double worst_overlap = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            worst_overlap = std::max(
                worst_overlap, polygon::overlap_area(images[i], images[j], contact_inset));

    CheckReport report;
    report.add_metric("containment_margin", containment);
    report.add_metric("max_pair_overlap", worst_overlap);
    report.add_metric("tolerance", tolerance);
    report.passed = containment >= -tolerance && worst_overlap <= tolerance * tolerance;
    if (!report.passed)
        report.notes = containment < -tolerance ? "an image leaves the candidate polygon"
                                                : "two images overlap in the interior";
    return report;
}

/// Similarity dimension log(m+1) / log|p(m+1)| of the attractor; under the
/// open set condition this is its Hausdorff dimension.
inline double similarity_dimension(const SignPattern& pattern) {
    const Complex p = detail::expansion_factor(pattern);
    return std::log(static_cast<double>(pattern.m()) + 1.0) / std::log(std::abs(p));
}

} // namespace koch
