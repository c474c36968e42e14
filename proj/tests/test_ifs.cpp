#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <koch/ifs.hpp>
#include <koch/analysis.hpp>

#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using koch::apply_similarity;
using koch::build_ifs;
using koch::Complex;
using koch::IfsSystem;
using koch::iterate_ifs;
using koch::make_pattern;
using koch::Polyline;
using koch::polyline_Q;
using koch::SignPattern;

TEST_CASE("ifs construction for m=2", "[ifs]") {
    // (+1,-1,+1): all three maps contract toward thirds of [0,1].
    const IfsSystem s = build_ifs(make_pattern(2, {-1, 1}));
    REQUIRE(s.maps.size() == 3);
    CHECK_THAT(s.ratio, WithinAbs(1.0 / 3.0, 1e-15));
    const std::vector<Complex> multipliers{{1.0 / 3.0, 0.0}, {1.0 / 3.0, 0.0}, {1.0 / 3.0, 0.0}};
    const std::vector<Complex> offsets{{0.0, 0.0}, {1.0 / 3.0, 0.0}, {2.0 / 3.0, 0.0}};
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK_THAT(std::abs(s.maps[j].multiplier - multipliers[j]), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(s.maps[j].offset - offsets[j]), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("ifs construction for the classical m=3 pattern", "[ifs]") {
    const IfsSystem s = build_ifs(testutil::classical_m3());
    REQUIRE(s.maps.size() == 4);
    CHECK_THAT(s.ratio, WithinAbs(1.0 / 3.0, 1e-13));

    // S_1(z) = (p(1) - e^(2 pi i/3) z)/3.
    const Complex expected_multiplier = -koch::root_of_unity(3, 1) / 3.0;
    CHECK_THAT(std::abs(s.maps[1].multiplier - expected_multiplier), WithinAbs(0.0, 1e-13));
    CHECK_THAT(std::abs(s.maps[1].offset - Complex{1.0 / 3.0, 0.0}), WithinAbs(0.0, 1e-13));

    CHECK(apply_similarity(s.maps[0], Complex{0.0, 0.0}) == Complex{0.0, 0.0});
    CHECK_THAT(std::abs(apply_similarity(s.maps[3], Complex{1.0, 0.0}) - Complex{1.0, 0.0}),
               WithinAbs(0.0, 1e-13));
}

TEST_CASE("non-expanding patterns are rejected", "[ifs]") {
    CHECK_THROWS_AS(build_ifs(testutil::classical_m1()), koch::NotContractingError);
    CHECK_THROWS_AS(build_ifs(testutil::all_plus(4)), koch::NotContractingError);
    try {
        build_ifs(testutil::all_plus(4));
        FAIL("expected NotContractingError");
    } catch (const koch::NotContractingError& e) {
        CHECK_THAT(e.modulus(), WithinAbs(1.0, 1e-12));
        CHECK(std::string(e.what()).find("|p(m+1)| > 1") != std::string::npos);
    }
}

TEST_CASE("pieces chain end to end", "[ifs]") {
    // S_j(1) = S_{j+1}(0) = p(j+1)/p(m+1).
    for (int m = 2; m <= 8; ++m) {
        const IfsSystem s = build_ifs(koch::corollary_pattern(m));
        for (std::size_t j = 0; j + 1 < s.maps.size(); ++j)
            REQUIRE(std::abs(apply_similarity(s.maps[j], Complex{1.0, 0.0}) -
                             apply_similarity(s.maps[j + 1], Complex{0.0, 0.0})) <= 1e-12);
    }
}

TEST_CASE("each map contracts by the common ratio", "[ifs]") {
    std::mt19937 gen(99u);
    const IfsSystem s = build_ifs(koch::corollary_pattern(5));
    for (int trial = 0; trial < 50; ++trial) {
        const Complex z{static_cast<double>(gen() % 2000) / 1000.0 - 1.0,
                        static_cast<double>(gen() % 2000) / 1000.0 - 1.0};
        const Complex w{static_cast<double>(gen() % 2000) / 1000.0 - 1.0,
                        static_cast<double>(gen() % 2000) / 1000.0 - 1.0};
        for (const koch::Similarity& map : s.maps) {
            const double lhs = std::abs(apply_similarity(map, z) - apply_similarity(map, w));
            REQUIRE_THAT(lhs, WithinAbs(s.ratio * std::abs(z - w), 1e-12));
        }
    }
}

TEST_CASE("iterated system reproduces the rescaled curve", "[ifs]") {
    const SignPattern classical = testutil::classical_m3();
    const IfsSystem s = build_ifs(classical);

    const Polyline seed = iterate_ifs(s, 0);
    REQUIRE(seed.size() == 2);
    CHECK(seed.vertices[0] == Complex{0.0, 0.0});
    CHECK(seed.vertices[1] == Complex{1.0, 0.0});

    const Polyline level1 = iterate_ifs(s, 1);
    const Polyline q1 = polyline_Q(classical, 1);
    REQUIRE(level1.size() == q1.size());
    for (std::size_t i = 0; i < q1.size(); ++i)
        REQUIRE(std::abs(level1.vertices[i] - q1.vertices[i]) <= 1e-12);

    const SignPattern wide = koch::corollary_pattern(4);
    const Polyline level2 = iterate_ifs(build_ifs(wide), 2);
    const Polyline q2 = polyline_Q(wide, 2);
    REQUIRE(level2.size() == 26);
    for (std::size_t i = 0; i < q2.size(); ++i)
        REQUIRE(std::abs(level2.vertices[i] - q2.vertices[i]) <= 1e-9);
}

TEST_CASE("iteration respects the vertex cap", "[ifs]") {
    const IfsSystem s = build_ifs(testutil::classical_m3());
    CHECK_THROWS_AS(iterate_ifs(s, 2, 10), std::length_error);
    CHECK(iterate_ifs(s, 2, 17).size() == 17);
}

TEST_CASE("self-similarity of the rescaled curves", "[ifs]") {
    const koch::CheckReport r3 =
        koch::self_similarity_check(testutil::classical_m3(), 3, 1e-9);
    CHECK(r3.passed);
    CHECK(r3.metric("max_deviation") <= 1e-12);
    CHECK(r3.metric("vertices") == 257.0);

    CHECK(koch::self_similarity_check(koch::corollary_pattern(4), 0, 1e-9).passed);
    CHECK(koch::self_similarity_check(koch::corollary_pattern(5), 2, 1e-9).passed);

    CHECK_THROWS_AS(koch::self_similarity_check(testutil::all_plus(3), 1, 1e-9),
                    koch::NotContractingError);
}

TEST_CASE("convergence diagnostics decay geometrically", "[ifs]") {
    const std::vector<double> gaps =
        koch::convergence_diagnostics(testutil::classical_m3(), 3, 1e-3);
    REQUIRE(gaps.size() == 3);
    CHECK_THAT(gaps[0], WithinAbs(std::sqrt(3.0) / 6.0, 2e-3));
    CHECK_THAT(gaps[1], WithinAbs(0.09622504486493762, 2e-3));
    CHECK(gaps[2] / gaps[1] >= 1.0 / 6.0);
    CHECK(gaps[2] / gaps[1] <= 2.0 / 3.0);

    // The straight-line m=2 pattern has every Q(n) equal to [0,1].
    const std::vector<double> flat =
        koch::convergence_diagnostics(make_pattern(2, {-1, 1}), 2, 1e-3);
    for (double d : flat)
        CHECK(d <= 2e-3);

    CHECK_THROWS_AS(koch::convergence_diagnostics(testutil::classical_m3(), 0, 1e-3),
                    std::invalid_argument);
}
