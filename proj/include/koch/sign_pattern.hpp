#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace koch {

using Sign = std::int8_t; // always +1 or -1

namespace limits {
// Hard caps keep accidental deep levels from exhausting memory.
inline constexpr std::uint64_t max_sequence_terms = std::uint64_t{1} << 24;
inline constexpr std::uint64_t max_polyline_vertices = (std::uint64_t{1} << 24) + 1;
} // namespace limits

/// A sign pattern (delta_0, ..., delta_m) with delta_0 = +1 and m >= 1.
/// It seeds the substitution  +1 -> +1, d1, ..., dm   and its negation,
/// whose fixed point is the generalized Thue-Morse sequence (delta_n).
class SignPattern {
public:
    SignPattern(int m, std::vector<Sign> deltas) : m_(m), deltas_(std::move(deltas)) {}

    int m() const noexcept { return m_; }

    /// delta_k for 0 <= k <= m.
    Sign delta(int k) const { return deltas_.at(static_cast<std::size_t>(k)); }

    /// All m+1 pattern signs, delta_0 first.
    const std::vector<Sign>& deltas() const noexcept { return deltas_; }

    friend bool operator==(const SignPattern&, const SignPattern&) = default;

private:
    int m_;
    std::vector<Sign> deltas_;
};

/// Builds the pattern from the m free signs delta_1..delta_m (delta_0 is +1).
/// Rejects m = 0 and any entry that is not +-1.
inline SignPattern make_pattern(int m, std::span<const int> signs) {
    if (m < 1)
        throw std::invalid_argument("sign pattern needs m >= 1");
    if (static_cast<int>(signs.size()) != m)
        throw std::invalid_argument("expected exactly m signs after delta_0");
    std::vector<Sign> deltas;
    deltas.reserve(static_cast<std::size_t>(m) + 1);
    deltas.push_back(Sign{1});
    for (int s : signs) {
        if (s != 1 && s != -1)
            throw std::invalid_argument("pattern signs must be +1 or -1");
        deltas.push_back(static_cast<Sign>(s));
    }
    return SignPattern(m, std::move(deltas));
}

inline SignPattern make_pattern(int m, std::initializer_list<int> signs) {
    return make_pattern(m, std::span<const int>(signs.begin(), signs.size()));
}

/// n-th sequence term in O(log n): delta_n is the product of delta_d over
/// the base-(m+1) digits d of n. Follows from delta_{r(m+1)+k} = delta_r delta_k.
inline Sign delta_at(const SignPattern& pattern, std::uint64_t n) {
    const auto base = static_cast<std::uint64_t>(pattern.m()) + 1;
    int product = 1;
    while (n > 0) {
        product *= pattern.delta(static_cast<int>(n % base));
        n /= base;
    }
    return static_cast<Sign>(product);
}

/// First `count` sequence terms by block substitution from the seed +1,
/// truncating every round to `count`. Independent of delta_at by design.
inline std::vector<Sign> sequence_prefix(const SignPattern& pattern, std::uint64_t count) {
    if (count == 0)
        throw std::invalid_argument("sequence prefix needs count >= 1");
    if (count > limits::max_sequence_terms)
        throw std::length_error("sequence prefix exceeds term cap");
    std::vector<Sign> terms{Sign{1}};
    const auto& deltas = pattern.deltas();
    while (terms.size() < count) {
        std::vector<Sign> next;
        next.reserve(std::min<std::uint64_t>(count, terms.size() * deltas.size()));
        for (Sign s : terms) {
            for (Sign d : deltas) {
                next.push_back(static_cast<Sign>(s * d));
                if (next.size() == count)
                    break;
            }
            if (next.size() == count)
                break;
        }
        terms = std::move(next);
    }
    return terms;
}

/// Classical Thue-Morse signs t_n = (-1)^(binary digit sum of n).
/// Reference oracle for the patterns (+1,-1) and (+1,-1,-1,+1).
inline Sign classical_tm_oracle(std::uint64_t n) {
    return (std::popcount(n) % 2 == 0) ? Sign{1} : Sign{-1};
}

} // namespace koch
