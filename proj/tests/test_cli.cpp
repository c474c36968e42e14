#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <koch/cli.hpp>

#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = koch::cli::run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("kochgen_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file.good());
    std::ostringstream content;
    content << file.rdbuf();
    return content.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream stream(text);
    while (std::getline(stream, line))
        lines.push_back(line);
    return lines;
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++count;
    return count;
}

} // namespace

TEST_CASE("cli dimension", "[cli]") {
    const CliResult result = run({"dimension", "--m", "3", "--signs", "-1,-1,1"});
    REQUIRE(result.code == 0);
    const std::vector<std::string> lines = split_lines(result.out);
    REQUIRE(lines.size() == 1);
    CHECK_THAT(std::strtod(lines[0].c_str(), nullptr),
               WithinAbs(std::log(4.0) / std::log(3.0), 1e-12));
    CHECK(lines[0].rfind("1.2618595071429", 0) == 0);
}

TEST_CASE("cli sequence csv and json", "[cli]") {
    const CliResult csv = run({"sequence", "--m", "1", "--signs", "-1", "--count", "8"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out == "n,delta\n0,1\n1,-1\n2,-1\n3,1\n4,-1\n5,1\n6,1\n7,-1\n");

    const CliResult json = run({"sequence", "--m", "1", "--signs", "-1", "--count", "4",
                                "--format", "json"});
    REQUIRE(json.code == 0);
    const nlohmann::json j = nlohmann::json::parse(json.out);
    CHECK(j["command"] == "sequence");
    CHECK(j["m"] == 1);
    CHECK(j["pattern"] == "+1,-1");
    CHECK(j["count"] == 4);
    CHECK(j["terms"] == nlohmann::json::array({1, -1, -1, 1}));
}

TEST_CASE("cli points", "[cli]") {
    const CliResult result = run({"points", "--m", "2", "--signs", "-1,1",
                                  "--count", "3"});
    REQUIRE(result.code == 0);
    CHECK(result.out == "re,im\n0,0\n1,0\n2,0\n3,0\n");

    CHECK(run({"points", "--m", "2", "--signs", "-1,1", "--count", "0"}).code == 2);
}

TEST_CASE("cli corollary composes with check", "[cli]") {
    const CliResult three = run({"corollary", "--m", "3"});
    REQUIRE(three.code == 0);
    CHECK(three.out == "-1,-1,1\n");

    const CliResult five = run({"corollary", "--m", "5"});
    REQUIRE(five.code == 0);
    CHECK(five.out == "1,-1,-1,1,1\n");
    std::string signs = five.out;
    signs.pop_back(); // trailing newline

    CHECK(run({"check", "osc", "--m", "5", "--signs", signs}).code == 0);
    CHECK(run({"corollary", "--m", "1"}).code == 2);
}

TEST_CASE("cli check reports", "[cli]") {
    const CliResult realness = run({"check", "realness", "--m", "4",
                                    "--signs", "1,-1,1,1", "--json"});
    REQUIRE(realness.code == 0);
    const nlohmann::json j = nlohmann::json::parse(realness.out);
    CHECK(j["type"] == "realness");
    CHECK(j["m"] == 4);
    CHECK(j["pattern"] == "+1,+1,-1,+1,+1");
    CHECK(j["passed"] == true);
    CHECK_THAT(j["re"].get<double>(), WithinAbs(3.0, 1e-12));
    CHECK_THAT(j["im"].get<double>(), WithinAbs(0.0, 1e-12));

    const CliResult self_similar =
        run({"check", "self-similar", "--m", "3", "--signs", "-1,-1,1"});
    CHECK(self_similar.code == 0);
    CHECK(self_similar.out.rfind("check self-similar: PASS", 0) == 0);

    // Conjugacy needs no contraction; the all-plus pattern still satisfies it.
    CHECK(run({"check", "conjugacy", "--m", "2", "--signs", "1,1"}).code == 0);

    const CliResult primitive =
        run({"check", "primitivity", "--m", "3", "--signs", "-1,-1,1"});
    CHECK(primitive.code == 0);
    CHECK(primitive.out.find("PASS") != std::string::npos);

    const CliResult never = run({"check", "primitivity", "--m", "2", "--signs", "-1,1"});
    CHECK(never.code == 1);
    CHECK(never.out.find("FAIL") != std::string::npos);
    CHECK(never.out.find("not primitive") != std::string::npos);

    const CliResult bad_osc =
        run({"check", "osc", "--m", "4", "--signs", "-1,-1,-1,1"});
    CHECK(bad_osc.code == 1);
    CHECK(bad_osc.out.find("FAIL") != std::string::npos);
}

TEST_CASE("cli im-lemmas takes only m", "[cli]") {
    const CliResult ok = run({"check", "im-lemmas", "--m", "7"});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("check im-lemmas: PASS", 0) == 0);

    CHECK(run({"check", "im-lemmas", "--m", "3"}).code == 2);
    CHECK(run({"check", "im-lemmas", "--m", "7", "--signs",
               "1,-1,-1,-1,-1,1,1"}).code == 2);
}

TEST_CASE("cli rejects malformed invocations", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"sequence", "--signs", "-1", "--count", "4"}).code == 2);
    CHECK(run({"sequence", "--m", "0", "--signs", "-1", "--count", "4"}).code == 2);
    CHECK(run({"sequence", "--m", "2", "--signs", "2,1", "--count", "4"}).code == 2);
    CHECK(run({"sequence", "--m", "3", "--signs", "-1,-1", "--count", "4"}).code == 2);
    CHECK(run({"sequence", "--m", "1", "--signs", "-1", "--count", "0"}).code == 2);
    CHECK(run({"check", "bogus", "--m", "3", "--signs", "-1,-1,1"}).code == 2);
    CHECK(run({"check", "osc", "--m", "3"}).code == 2);
    CHECK(run({"curve", "--m", "3", "--signs", "-1,-1,1", "--level", "1",
               "--out", "x.txt"}).code == 2);
    CHECK(run({"dimension", "--m", "2", "--signs", "1,1"}).code == 2);

    const CliResult no_contraction = run({"curve", "--m", "2", "--signs", "1,1",
                                          "--level", "1", "--out", "never.csv"});
    CHECK(no_contraction.code == 2);
    CHECK(no_contraction.err.find("|p(m+1)| > 1") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists("never.csv"));

    const CliResult help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("sequence") != std::string::npos);
    CHECK(help.out.find("check") != std::string::npos);
}

TEST_CASE("cli curve and attractor agree byte for byte", "[cli]") {
    const std::filesystem::path first = temp_file("curve_a.csv");
    const std::filesystem::path second = temp_file("curve_b.csv");
    const std::filesystem::path third = temp_file("attractor.csv");
    const std::vector<std::string> base{"--m", "4", "--signs", "1,-1,1,1",
                                        "--level", "2"};

    std::vector<std::string> curve_args{"curve"};
    curve_args.insert(curve_args.end(), base.begin(), base.end());
    curve_args.push_back("--scaled");
    curve_args.push_back("--out");

    std::vector<std::string> once = curve_args;
    once.push_back(first.string());
    REQUIRE(run(once).code == 0);
    std::vector<std::string> again = curve_args;
    again.push_back(second.string());
    REQUIRE(run(again).code == 0);

    std::vector<std::string> attractor_args{"attractor"};
    attractor_args.insert(attractor_args.end(), base.begin(), base.end());
    attractor_args.push_back("--out");
    attractor_args.push_back(third.string());
    REQUIRE(run(attractor_args).code == 0);

    const std::string reference = slurp(first);
    CHECK(reference == slurp(second));
    CHECK(reference == slurp(third));
    CHECK(reference.rfind("re,im\n0,0\n", 0) == 0);

    std::filesystem::remove(first);
    std::filesystem::remove(second);
    std::filesystem::remove(third);
}

TEST_CASE("cli svg output", "[cli]") {
    const std::filesystem::path path = temp_file("curve.svg");
    const CliResult result =
        run({"curve", "--m", "3", "--signs", "-1,-1,1", "--level", "2", "--scaled",
             "--out", path.string(), "--show-open-sets", "--show-prev"});
    REQUIRE(result.code == 0);
    const std::string svg = slurp(path);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count_occurrences(svg, "<polygon") == 5);
    CHECK(count_occurrences(svg, "<path") == 2);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("cli converge", "[cli]") {
    const CliResult result = run({"converge", "--m", "2", "--signs", "-1,1",
                                  "--max-level", "2"});
    REQUIRE(result.code == 0);
    const std::vector<std::string> lines = split_lines(result.out);
    REQUIRE(lines.size() == 3);
    CHECK(std::strtod(lines[0].c_str(), nullptr) < 1e-9);
    CHECK(std::strtod(lines[1].c_str(), nullptr) < 1e-9);
    CHECK(lines[2].rfind("# tail bound:", 0) == 0);
}

TEST_CASE("cli area ratio", "[cli]") {
    const CliResult result =
        run({"area-ratio", "--m", "3", "--signs", "-1,-1,1", "--level", "0",
             "--epsilon", "0.1", "--resolution", "512"});
    REQUIRE(result.code == 0);
    const double value = std::strtod(result.out.c_str(), nullptr);
    CHECK_THAT(value, WithinRel(0.2 + 0.01 * 3.141592653589793, 0.02));
}

TEST_CASE("cli stdout is deterministic", "[cli]") {
    const std::vector<std::string> osc{"check", "osc", "--m", "7",
                                       "--signs", "1,-1,-1,-1,-1,1,1", "--json"};
    const CliResult a = run(osc);
    const CliResult b = run(osc);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const std::vector<std::string> seq{"sequence", "--m", "3", "--signs", "-1,-1,1",
                                       "--count", "64"};
    CHECK(run(seq).out == run(seq).out);
}

TEST_CASE("cli exit codes track the contraction hypothesis", "[cli]") {
    std::mt19937 gen(4242u);
    for (int m = 1; m <= 6; ++m) {
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<int> signs;
            std::string signs_text;
            for (int i = 0; i < m; ++i) {
                signs.push_back((gen() & 1u) ? 1 : -1);
                if (!signs_text.empty())
                    signs_text += ',';
                signs_text += (signs.back() > 0) ? "1" : "-1";
            }
            const koch::SignPattern pattern = koch::make_pattern(m, signs);
            const double modulus = std::abs(
                koch::partial_sum(pattern, static_cast<std::uint64_t>(m) + 1));
            const int expected =
                (modulus > 1.0 + koch::detail::contraction_margin) ? 0 : 2;

            CAPTURE(m, signs_text);
            CHECK(run({"dimension", "--m", std::to_string(m),
                       "--signs", signs_text}).code == expected);
            CHECK(run({"sequence", "--m", std::to_string(m), "--signs", signs_text,
                       "--count", "5"}).code == 0);
        }
    }
}
