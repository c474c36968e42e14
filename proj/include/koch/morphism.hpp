#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "geometry.hpp"
#include "sign_pattern.hpp"

namespace koch {

using Word = std::vector<int>;

enum class Parity { odd, even };

/// Constant-length substitution phi on Z/N whose fixed point projects onto
/// the curve: N = 2m for odd m (letters are half-turn directions e^(a*pi*i/m)),
/// N = m for even m (letters are full directions e^(2*a*pi*i/m)).
struct Morphism {
    int m = 0;
    Parity parity = Parity::odd;
    int alphabet_size = 0;
    std::vector<Word> images; // images[a] has length m+1, images[a][0] == a

    friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// Builds phi from the sign pattern:
///   odd m:  phi(a)_k = a + 2k + (m if delta_k = -1)   mod 2m
///   even m: phi(a)_k = a + k  + (m/2 if delta_k = -1) mod m
inline Morphism build_morphism(const SignPattern& pattern) {
    const int m = pattern.m();
    Morphism phi;
    phi.m = m;
    phi.parity = (m % 2 == 1) ? Parity::odd : Parity::even;
    phi.alphabet_size = (phi.parity == Parity::odd) ? 2 * m : m;

    const int n = phi.alphabet_size;
    phi.images.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Word& image = phi.images[static_cast<std::size_t>(a)];
        image.reserve(static_cast<std::size_t>(m) + 1);
        for (int k = 0; k <= m; ++k) {
            const int flip = (pattern.delta(k) < 0) ? n / 2 : 0;
            const int step = (phi.parity == Parity::odd) ? 2 * k : k;
            image.push_back((a + step + flip) % n);
        }
    }
    return phi;
}

inline Word apply_morphism(const Morphism& phi, const Word& word) {
    Word result;
    result.reserve(word.size() * (static_cast<std::size_t>(phi.m) + 1));
    for (int a : word) {
        if (a < 0 || a >= phi.alphabet_size)
            throw std::out_of_range("symbol outside alphabet");
        const Word& image = phi.images[static_cast<std::size_t>(a)];
        result.insert(result.end(), image.begin(), image.end());
    }
    return result;
}

/// phi^n(a); length (m+1)^n, capped like the sequence prefix.
inline Word iterate_symbol(const Morphism& phi, int symbol, unsigned n) {
    if (symbol < 0 || symbol >= phi.alphabet_size)
        throw std::out_of_range("symbol outside alphabet");
    detail::power_checked(static_cast<std::uint64_t>(phi.m) + 1, n,
                          limits::max_sequence_terms);
    Word word{symbol};
    for (unsigned i = 0; i < n; ++i)
        word = apply_morphism(phi, word);
    return word;
}

/// Letter embedding f(w) = sum over letters of the letter's direction.
inline Complex embedding_f(const Morphism& phi, const Word& word) {
    const int order = (phi.parity == Parity::odd) ? 2 * phi.m : phi.m;
    Complex sum{0.0, 0.0};
    for (int a : word) {
        if (a < 0 || a >= phi.alphabet_size)
            throw std::out_of_range("symbol outside alphabet");
        sum += root_of_unity(order, a);
    }
    return sum;
}

/// Verifies the conjugacy f(phi(w)) = p(m+1) f(w) on the given word, plus
/// the prefix identities f(phi^n(first j letters of phi(0))) = p(j(m+1)^n)
/// for j = 1..m and n <= 3. Prefix identities accumulate more rounding and
/// get a 10x tolerance allowance.
inline CheckReport conjugacy_check(const SignPattern& pattern, const Word& word,
                                   double tolerance) {
    const Morphism phi = build_morphism(pattern);
    const Complex p =
        partial_sum(pattern, static_cast<std::uint64_t>(pattern.m()) + 1);

    CheckReport report;
    double word_deviation = 0.0;
    if (!word.empty()) {
        const Complex lhs = embedding_f(phi, apply_morphism(phi, word));
        const Complex rhs = p * embedding_f(phi, word);
        word_deviation = std::abs(lhs - rhs);
    }

    // f is additive over concatenation, so f(phi^n(prefix)) is a running
    // sum of the per-letter values f(phi^n(letter)).
    const int m = pattern.m();
    constexpr unsigned max_power = 3;
    std::vector<Complex> letter_sum(static_cast<std::size_t>(phi.alphabet_size));
    double prefix_deviation = 0.0;
    for (unsigned n = 0; n <= max_power; ++n) {
        for (int a = 0; a < phi.alphabet_size; ++a)
            letter_sum[static_cast<std::size_t>(a)] =
                embedding_f(phi, iterate_symbol(phi, a, n));

        // p(j(m+1)^n) for all j in one sweep over the sign sequence.
        const auto block = detail::power_checked(
            static_cast<std::uint64_t>(m) + 1, n, limits::max_sequence_terms);
        const auto signs =
            sequence_prefix(pattern, static_cast<std::uint64_t>(m) * block);
        const auto roots = detail::unit_root_table(m);
        Complex partial{0.0, 0.0};
        Complex embedded{0.0, 0.0};
        std::uint64_t index = 0;
        for (int j = 1; j <= m; ++j) {
            for (; index < static_cast<std::uint64_t>(j) * block; ++index)
                partial += static_cast<double>(signs[static_cast<std::size_t>(index)]) *
                           roots[static_cast<std::size_t>(
                               index % static_cast<std::uint64_t>(m))];
            embedded +=
                letter_sum[static_cast<std::size_t>(phi.images[0][static_cast<std::size_t>(j - 1)])];
            prefix_deviation = std::max(prefix_deviation, std::abs(embedded - partial));
        }
    }

    report.add_metric("word_deviation", word_deviation);
    report.add_metric("prefix_deviation", prefix_deviation);
    report.add_metric("tolerance", tolerance);
    report.passed =
        word_deviation <= tolerance && prefix_deviation <= 10.0 * tolerance;
    if (!report.passed)
        report.notes = "conjugacy deviation exceeds tolerance";
    return report;
}

/// Square nonnegative integer matrix M[a][b] = occurrences of b in phi(a).
/// Circulant with row sums m+1 by construction; both are asserted.
struct IncidenceMatrix {
    std::vector<std::vector<std::int64_t>> entries;

    std::size_t size() const noexcept { return entries.size(); }
};

inline IncidenceMatrix incidence_matrix(const Morphism& phi) {
    const auto n = static_cast<std::size_t>(phi.alphabet_size);
    IncidenceMatrix matrix;
    matrix.entries.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (int b : phi.images[a])
            ++matrix.entries[a][static_cast<std::size_t>(b)];

    for (std::size_t a = 0; a < n; ++a) {
        std::int64_t row_sum = 0;
        for (std::size_t b = 0; b < n; ++b) {
            row_sum += matrix.entries[a][b];
            if (matrix.entries[(a + 1) % n][(b + 1) % n] != matrix.entries[a][b])
                throw std::logic_error("incidence matrix is not circulant");
        }
        if (row_sum != phi.m + 1)
            throw std::logic_error("incidence row sum is not m+1");
    }
    return matrix;
}

/// Dominant eigenvalue by power iteration from the all-ones vector with
/// Rayleigh quotient readout. For the circulant incidence matrices the
/// all-ones vector is already the Perron eigenvector.
inline double dominant_eigenvalue(const IncidenceMatrix& matrix, unsigned iterations) {
    const std::size_t n = matrix.size();
    if (n == 0)
        throw std::invalid_argument("empty matrix");
    if (iterations == 0)
        throw std::invalid_argument("need at least one iteration");

    std::vector<double> v(n, 1.0);
    std::vector<double> w(n, 0.0);
    double eigenvalue = 0.0;
    for (unsigned it = 0; it < iterations; ++it) {
        double dot_vw = 0.0;
        double dot_vv = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            double sum = 0.0;
            for (std::size_t b = 0; b < n; ++b)
                sum += static_cast<double>(matrix.entries[a][b]) * v[b];
            w[a] = sum;
            dot_vw += v[a] * sum;
            dot_vv += v[a] * v[a];
        }
        eigenvalue = dot_vw / dot_vv;
        double norm = 0.0;
        for (double x : w)
            norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0)
            return 0.0;
        for (std::size_t a = 0; a < n; ++a)
            v[a] = w[a] / norm;
    }
    return eigenvalue;
}

struct PrimitivityResult {
    std::optional<unsigned> index; // least n with phi^n(0) full-alphabet
    CheckReport report;
};

/// Least n <= bound such that phi^n(0) contains every letter, decided by
/// boolean reachability from letter 0 (letters of phi^n(0) are exactly the
/// endpoints of length-n paths from 0 in the incidence digraph). Never
/// materializes phi^n(0). A bound of 0 selects the default max(2m-1, m).
inline PrimitivityResult primitivity_index(const Morphism& phi, unsigned bound = 0) {
    if (bound == 0)
        bound = static_cast<unsigned>(std::max(2 * phi.m - 1, phi.m));
    const auto n = static_cast<std::size_t>(phi.alphabet_size);
    std::vector<std::vector<bool>> adjacency(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
        for (int b : phi.images[a])
            adjacency[a][static_cast<std::size_t>(b)] = true;

    PrimitivityResult result;
    result.report.add_metric("bound", static_cast<double>(bound));
    result.report.add_metric("alphabet_size", static_cast<double>(n));

    // phi(a) starts with a, so reachability sets grow monotonically and a
    // fixed point before full coverage proves phi can never be primitive.
    std::vector<bool> reach(n, false);
    reach[0] = true;
    for (unsigned step = 1; step <= bound; ++step) {
        std::vector<bool> next(n, false);
        for (std::size_t a = 0; a < n; ++a) {
            if (!reach[a])
                continue;
            for (std::size_t b = 0; b < n; ++b)
                if (adjacency[a][b])
                    next[b] = true;
        }
        const bool full =
            std::all_of(next.begin(), next.end(), [](bool x) { return x; });
        const bool stable = next == reach;
        reach = std::move(next);
        if (full) {
            result.index = step;
            result.report.passed = true;
            result.report.add_metric("index", static_cast<double>(step));
            result.report.notes =
                "phi^" + std::to_string(step) +
                "(0) contains every letter; the incidence power M^" +
                std::to_string(step) + " is entrywise positive";
            return result;
        }
        if (stable) {
            result.report.passed = false;
            result.report.add_metric(
                "stable_coverage",
                static_cast<double>(std::count(reach.begin(), reach.end(), true)));
            result.report.notes =
                "letter coverage of phi^n(0) stabilizes below the full alphabet; "
                "phi is not primitive for any exponent (for m = 2 this is the "
                "degenerate phi(0) = 000 case)";
            return result;
        }
    }
    result.report.passed = false;
    result.report.notes = "no exponent up to the bound makes phi^n(0) full-alphabet";
    return result;
}

} // namespace koch
