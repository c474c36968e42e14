#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "koch.hpp"

namespace koch {
namespace cli {

// Exit codes: 0 success / check passed, 1 failed check or runtime failure,
// 2 argument or precondition errors.
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_bad_arguments = 2;

namespace detail {

inline std::vector<int> parse_signs(const std::string& text) {
    std::vector<int> signs;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token == "1" || token == "+1")
            signs.push_back(1);
        else if (token == "-1")
            signs.push_back(-1);
        else
            throw std::invalid_argument("sign '" + token + "' is not +1 or -1");
    }
    if (signs.empty())
        throw std::invalid_argument("empty sign list");
    return signs;
}

inline SignPattern pattern_from(int m, const std::string& signs_text) {
    const std::vector<int> signs = parse_signs(signs_text);
    return make_pattern(m, signs);
}

inline std::string pattern_echo(const SignPattern& pattern) {
    std::string echo;
    for (Sign d : pattern.deltas()) {
        if (!echo.empty())
            echo += ',';
        echo += (d > 0) ? "+1" : "-1";
    }
    return echo;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    file << content;
    if (!file.good())
        throw std::runtime_error("cannot write " + path);
}

inline void print_report(std::ostream& out, const std::string& type,
                         const SignPattern& pattern, const CheckReport& report,
                         bool as_json) {
    if (as_json) {
        nlohmann::ordered_json j;
        j["command"] = "check";
        j["type"] = type;
        j["m"] = pattern.m();
        j["pattern"] = pattern_echo(pattern);
        j["passed"] = report.passed;
        for (const auto& [name, value] : report.metrics)
            j[name] = value;
        j["notes"] = report.notes;
        out << j.dump(2) << '\n';
        return;
    }
    out << "check " << type << ": " << (report.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& [name, value] : report.metrics)
        out << "  " << name << " = " << format_double(value) << '\n';
    if (!report.notes.empty())
        out << "  notes: " << report.notes << '\n';
}

// Deterministic pseudo-random words over the morphism alphabet. Raw
// generator output is reduced by modulo so the stream does not depend on
// the standard library's distribution implementation.
inline std::vector<Word> sample_words(const Morphism& phi, std::size_t count) {
    std::mt19937 gen(0x5eedu);
    std::vector<Word> words;
    words.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t length = 1 + gen() % 32;
        Word word;
        word.reserve(length);
        for (std::size_t k = 0; k < length; ++k)
            word.push_back(static_cast<int>(gen() % static_cast<unsigned>(phi.alphabet_size)));
        words.push_back(std::move(word));
    }
    return words;
}

/// Aggregated conjugacy check over the alphabet singletons plus seeded
/// random words; reports the worst deviations seen.
inline CheckReport conjugacy_sweep(const SignPattern& pattern, double tolerance,
                                   std::size_t random_words) {
    const Morphism phi = build_morphism(pattern);
    std::vector<Word> words;
    for (int a = 0; a < phi.alphabet_size; ++a)
        words.push_back({a});
    for (Word& w : sample_words(phi, random_words))
        words.push_back(std::move(w));

    CheckReport aggregate;
    aggregate.passed = true;
    double worst_word = 0.0;
    double worst_prefix = 0.0;
    for (const Word& word : words) {
        const CheckReport one = conjugacy_check(pattern, word, tolerance);
        worst_word = std::max(worst_word, one.metric("word_deviation"));
        worst_prefix = std::max(worst_prefix, one.metric("prefix_deviation"));
        aggregate.passed = aggregate.passed && one.passed;
    }
    aggregate.add_metric("words", static_cast<double>(words.size()));
    aggregate.add_metric("word_deviation", worst_word);
    aggregate.add_metric("prefix_deviation", worst_prefix);
    aggregate.add_metric("tolerance", tolerance);
    if (!aggregate.passed)
        aggregate.notes = "conjugacy deviation exceeds tolerance";
    return aggregate;
}

inline RenderStyle style_from(int width, int height, double margin, double stroke,
                              bool open_sets, bool dashed) {
    RenderStyle style;
    style.canvas_width = width;
    style.canvas_height = height;
    style.margin = margin;
    style.stroke_width = stroke;
    style.draw_open_sets = open_sets;
    style.dashed_previous = dashed;
    return style;
}

inline void write_curve_output(const std::string& path, const SignPattern& pattern,
                               const Polyline& line, const Polyline* previous,
                               const RenderStyle& style) {
    if (path.ends_with(".csv")) {
        write_file(path, export_csv(line));
        return;
    }
    if (!path.ends_with(".svg"))
        throw std::invalid_argument("output file must end in .svg or .csv");
    std::vector<Polyline> curves;
    if (previous != nullptr)
        curves.push_back(*previous);
    curves.push_back(line);
    std::vector<std::vector<Complex>> polygons;
    if (style.draw_open_sets) {
        const OpenSetPolygon base = open_set(pattern.m());
        polygons.push_back(base.vertices);
        for (const Similarity& map : build_ifs(pattern).maps) {
            std::vector<Complex> image;
            image.reserve(base.vertices.size());
            for (Complex v : base.vertices)
                image.push_back(apply_similarity(map, v));
            polygons.push_back(std::move(image));
        }
    }
    write_file(path, render_svg(curves, polygons, style));
}

} // namespace detail

/// Runs one CLI invocation; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"generalized Koch curves from generalized Thue-Morse sign sequences",
                 "kochgen"};
    app.require_subcommand(1);

    int m = 0;
    std::string signs_text;
    std::uint64_t count = 0;
    unsigned level = 0;
    unsigned max_level = 1;
    bool scaled = false;
    std::string out_path;
    std::string format = "csv";
    std::string check_type;
    double tolerance = 1e-9;
    double step = 1e-3;
    double epsilon = 0.0;
    int resolution = 1024;
    unsigned bound = 0;
    bool as_json = false;
    int width = 800;
    int height = 600;
    double margin = 0.05;
    double stroke = 1.0;
    bool show_open_sets = false;
    bool show_previous = false;

    auto add_pattern_options = [&](CLI::App* cmd, bool signs_required = true) {
        cmd->add_option("--m", m, "number of rotations per block (m >= 1)")->required();
        auto* opt = cmd->add_option("--signs", signs_text,
                                    "comma-separated signs delta_1..delta_m, e.g. -1,-1,+1");
        if (signs_required)
            opt->required();
    };

    auto* sequence_cmd =
        app.add_subcommand("sequence", "first terms of the sign sequence");
    add_pattern_options(sequence_cmd);
    sequence_cmd->add_option("--count", count, "number of terms")->required();
    sequence_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* points_cmd =
        app.add_subcommand("points", "partial sums p(0..count) as CSV");
    add_pattern_options(points_cmd);
    points_cmd->add_option("--count", count, "last partial sum index")->required();

    auto* curve_cmd =
        app.add_subcommand("curve", "level-n polygonal approximation to SVG or CSV");
    add_pattern_options(curve_cmd);
    curve_cmd->add_option("--level", level, "construction level n")->required();
    curve_cmd->add_flag("--scaled", scaled, "emit Q(n) instead of P(n)");
    curve_cmd->add_option("--out", out_path, "output file (.svg or .csv)")->required();
    curve_cmd->add_option("--width", width, "canvas width (SVG)");
    curve_cmd->add_option("--height", height, "canvas height (SVG)");
    curve_cmd->add_option("--margin", margin, "canvas margin fraction (SVG)");
    curve_cmd->add_option("--stroke", stroke, "stroke width (SVG)");
    curve_cmd->add_flag("--show-open-sets", show_open_sets,
                        "overlay the open-set polygon and its images (SVG, scaled)");
    curve_cmd->add_flag("--show-prev", show_previous,
                        "draw the previous level dashed underneath (SVG)");

    auto* attractor_cmd = app.add_subcommand(
        "attractor", "IFS-iterated approximation; equals curve --scaled");
    add_pattern_options(attractor_cmd);
    attractor_cmd->add_option("--level", level, "iteration depth")->required();
    attractor_cmd->add_option("--out", out_path, "output file (.svg or .csv)")->required();
    attractor_cmd->add_option("--width", width, "canvas width (SVG)");
    attractor_cmd->add_option("--height", height, "canvas height (SVG)");
    attractor_cmd->add_option("--margin", margin, "canvas margin fraction (SVG)");
    attractor_cmd->add_option("--stroke", stroke, "stroke width (SVG)");
    attractor_cmd->add_flag("--show-open-sets", show_open_sets,
                            "overlay the open-set polygon and its images (SVG)");

    auto* check_cmd = app.add_subcommand("check", "run a verification check");
    check_cmd
        ->add_option("type", check_type,
                     "self-similar | conjugacy | osc | realness | im-lemmas | primitivity")
        ->required()
        ->check(CLI::IsMember({"self-similar", "conjugacy", "osc", "realness",
                               "im-lemmas", "primitivity"}));
    check_cmd->add_option("--m", m, "number of rotations per block")->required();
    check_cmd->add_option("--signs", signs_text, "comma-separated signs delta_1..delta_m");
    check_cmd->add_option("--level", level, "level for self-similar (default 3)");
    check_cmd->add_option("--tol", tolerance, "tolerance (default 1e-9)");
    check_cmd->add_option("--bound", bound,
                          "primitivity search bound (default max(2m-1, m))");
    check_cmd->add_flag("--json", as_json, "emit the report as JSON");

    auto* dimension_cmd =
        app.add_subcommand("dimension", "similarity dimension of the attractor");
    add_pattern_options(dimension_cmd);

    auto* converge_cmd = app.add_subcommand(
        "converge", "successive Hausdorff distances d_H(Q(n), Q(n+1))");
    add_pattern_options(converge_cmd);
    converge_cmd->add_option("--max-level", max_level, "deepest level")->required();
    converge_cmd->add_option("--step", step, "sampling step (default 1e-3)");

    auto* corollary_cmd = app.add_subcommand(
        "corollary", "signs of the corollary pattern, composable with --signs");
    corollary_cmd->add_option("--m", m, "number of rotations per block (m >= 2)")
        ->required();

    auto* area_cmd = app.add_subcommand(
        "area-ratio", "epsilon-neighborhood area of P(n) over (m+1)^n");
    add_pattern_options(area_cmd);
    area_cmd->add_option("--level", level, "construction level n")->required();
    area_cmd->add_option("--epsilon", epsilon, "neighborhood radius")->required();
    area_cmd->add_option("--resolution", resolution, "raster grid resolution (>= 64)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int cli_code = app.exit(e, out, err);
        return cli_code == 0 ? exit_ok : exit_bad_arguments;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = exit_ok;
    try {
        if (sequence_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            const auto terms = sequence_prefix(pattern, count);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["command"] = "sequence";
                j["m"] = pattern.m();
                j["pattern"] = detail::pattern_echo(pattern);
                j["count"] = count;
                j["terms"] = nlohmann::ordered_json::array();
                for (Sign s : terms)
                    j["terms"].push_back(static_cast<int>(s));
                out << j.dump(2) << '\n';
            } else {
                out << "n,delta\n";
                for (std::size_t i = 0; i < terms.size(); ++i)
                    out << i << ',' << static_cast<int>(terms[i]) << '\n';
            }
        } else if (points_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            if (count == 0)
                throw std::invalid_argument("count must be >= 1");
            out << export_csv(partial_sum_walk(pattern, count));
        } else if (curve_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            (void)koch::detail::expansion_factor(pattern); // curve requires |p(m+1)| > 1
            const Polyline line =
                scaled ? polyline_Q(pattern, level) : polyline_P(pattern, level);
            Polyline previous;
            const Polyline* previous_ptr = nullptr;
            if (show_previous && level > 0) {
                previous = scaled ? polyline_Q(pattern, level - 1)
                                  : polyline_P(pattern, level - 1);
                previous_ptr = &previous;
            }
            detail::write_curve_output(
                out_path, pattern, line, previous_ptr,
                detail::style_from(width, height, margin, stroke,
                                   show_open_sets && scaled, show_previous));
        } else if (attractor_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            const IfsSystem system = build_ifs(pattern);
            const Polyline iterated = iterate_ifs(system, level);
            const Polyline canonical = polyline_Q(pattern, level);
            if (iterated.size() != canonical.size())
                throw std::runtime_error(
                    "IFS iteration disagrees with the partial-sum construction");
            double deviation = 0.0;
            for (std::size_t i = 0; i < canonical.size(); ++i)
                deviation = std::max(
                    deviation, std::abs(iterated.vertices[i] - canonical.vertices[i]));
            if (deviation > 1e-9)
                throw std::runtime_error(
                    "IFS iteration disagrees with the partial-sum construction");
            detail::write_curve_output(out_path, pattern, canonical, nullptr,
                                       detail::style_from(width, height, margin, stroke,
                                                          show_open_sets, false));
        } else if (check_cmd->parsed()) {
            CheckReport report;
            SignPattern pattern = make_pattern(1, {1}); // replaced below
            if (check_type == "im-lemmas") {
                if (!signs_text.empty())
                    throw std::invalid_argument(
                        "im-lemmas is a statement about the corollary pattern; "
                        "it takes only --m");
                pattern = corollary_pattern(m);
                report = imaginary_part_lemmas(m);
            } else {
                if (signs_text.empty())
                    throw std::invalid_argument("--signs is required for this check");
                pattern = detail::pattern_from(m, signs_text);
                if (check_type == "self-similar") {
                    const unsigned check_level = check_cmd->count("--level") ? level : 3;
                    report = self_similarity_check(pattern, check_level, tolerance);
                } else if (check_type == "conjugacy") {
                    report = detail::conjugacy_sweep(pattern, tolerance, 20);
                } else if (check_type == "osc") {
                    report = osc_check(pattern, open_set(m), tolerance);
                } else if (check_type == "realness") {
                    report = realness_check(pattern, tolerance);
                } else {
                    report = primitivity_index(build_morphism(pattern), bound).report;
                }
            }
            detail::print_report(out, check_type, pattern, report, as_json);
            code = report.passed ? exit_ok : exit_check_failed;
        } else if (dimension_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            out << format_double(similarity_dimension(pattern)) << '\n';
        } else if (converge_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            const std::vector<double> distances =
                convergence_diagnostics(pattern, max_level, step);
            for (double d : distances)
                out << format_double(d) << '\n';
            const double ratio = build_ifs(pattern).ratio;
            out << "# tail bound: d_H(Q(" << max_level << "), limit) <= "
                << format_double(distances.back() * ratio / (1.0 - ratio))
                << " (last distance times r/(1-r), r = " << format_double(ratio)
                << ")\n";
        } else if (corollary_cmd->parsed()) {
            const SignPattern pattern = corollary_pattern(m);
            std::string signs;
            for (std::size_t i = 1; i < pattern.deltas().size(); ++i) {
                if (!signs.empty())
                    signs += ',';
                signs += (pattern.deltas()[i] > 0) ? "1" : "-1";
            }
            out << signs << '\n';
        } else if (area_cmd->parsed()) {
            const SignPattern pattern = detail::pattern_from(m, signs_text);
            out << format_double(epsilon_area_ratio(pattern, level, epsilon, resolution))
                << '\n';
        }
    } catch (const NotContractingError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_arguments;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_arguments;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_arguments;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_check_failed;
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    err << "elapsed_ms=" << elapsed.count() << '\n';
    return code;
}

} // namespace cli
} // namespace koch
