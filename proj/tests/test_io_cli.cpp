#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bifree/io.hpp"
#include "fixtures.hpp"

using namespace bifree;
using namespace bifree::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "bifree_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Path of the CLI binary, provided by CTest through the environment.
std::string cli_path() {
    const char* env = std::getenv("BIFREE_BIN");
    return env ? env : "";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("rational scalars round-trip as canonical strings") {
    CHECK(scalar_to_json(Q(-7, 6)) == json("-7/6"));
    CHECK(scalar_to_json(Q(5)) == json("5"));
    CHECK(scalar_from_json<Rational>(json("3/6")) == Q(1, 2));
    CHECK(scalar_from_json<Rational>(json(4)) == Q(4));
    CHECK_THROWS_AS(scalar_from_json<Rational>(json(0.5)), ParseError);
    CHECK_THROWS_AS(scalar_from_json<Rational>(json("1/0")), ParseError);
    CHECK(scalar_from_json<Complex>(json::array({1.5, -2.0})) == Complex(1.5, -2.0));
}

TEST_CASE("series and two-band JSON round trips") {
    RationalGen gen(9001);
    for (int rep = 0; rep < 10; ++rep) {
        Series2<Rational> f(4);
        for (Index p = 0; p <= 4; ++p)
            for (Index q = 0; q <= 4; ++q) f(p, q) = gen.next();
        CHECK(series2_from_json<Rational>(series_to_json(f)) == f);

        Series1<Rational> g(6);
        for (Index k = 0; k <= 6; ++k) g[k] = gen.next();
        CHECK(series1_from_json<Rational>(series_to_json(g)) == g);

        const TwoBand<Rational> d = random_two_band(gen, 4, false, false);
        CHECK(two_band_from_json<Rational>(two_band_to_json(d)) == d);
    }
}

TEST_CASE("series kind mismatches are rejected") {
    const Series1<Rational> f = Series1<Rational>::one(3);
    CHECK_THROWS_AS(series2_from_json<Rational>(series_to_json(f)), KindMismatchError);
    const Series2<Rational> g = Series2<Rational>::one(3);
    CHECK_THROWS_AS(series1_from_json<Rational>(series_to_json(g)), KindMismatchError);
}

TEST_CASE("parametric distribution inputs") {
    const json atoms = {{"order", 3},
                        {"atoms", {{"1", "1", "1/2"}, {"3", "2", "1/2"}}}};
    CHECK(two_band_from_json<Rational>(atoms) == mixed_pair_a(3));
    // CLI order override wins over the file's order.
    CHECK(two_band_from_json<Rational>(atoms, 5) == mixed_pair_a(5));

    const json fac = {{"order", 2},
                      {"factorizing",
                       {{"left", {"1", "2", "5"}}, {"right", {"1", "1/2", "1/3"}}}}};
    const auto d = two_band_from_json<Rational>(fac);
    CHECK(d.moment(2, 2) == Q(5) * Q(1, 3));

    CHECK_THROWS_AS(two_band_from_json<Rational>(json{{"atoms", json::array()}}),
                    ParseError);
    CHECK_THROWS_AS(
        two_band_from_json<Rational>(json{{"order", 1}, {"moments", {{1, 2}}}}),
        ParseError);
    // m[0][0] != 1 is rejected, not renormalized.
    json wrong_unit;
    wrong_unit["moments"] =
        json::array({json::array({"2", "0"}), json::array({"0", "0"})});
    CHECK_THROWS_AS(two_band_from_json<Rational>(wrong_unit), InvalidMomentsError);
}

TEST_CASE("transform JSON carries the kind") {
    const auto t = partial_t_transform(mixed_pair_a(4));
    const json j = transform_to_json(t);
    CHECK(j.at("kind") == "t");
    const auto back = transform_from_json<Rational>(j);
    CHECK(back.kind == TransformKind::t);
    CHECK(back.series == t.series);
}

TEST_CASE("cli: transforms, convolutions and the oracle agree end to end") {
    REQUIRE_MESSAGE(!cli_path().empty(), "BIFREE_BIN must point at the CLI binary");
    const fs::path dir = scratch_dir();
    write_file(dir / "mu.json",
               R"({"order": 5, "atoms": [["1","1","1/2"],["3","2","1/2"]]})");
    write_file(dir / "nu.json",
               R"({"order": 5, "atoms": [["1","1","1/2"],["2","1","1/2"]]})");
    write_file(dir / "fac.json",
               R"({"order": 5, "factorizing": {"left": ["1","2","5","14","42","132"],
                   "right": ["1","1/2","1/3","1/4","1/5","1/6"]}})");

    const std::string d = dir.string() + "/";

    // A factorizing distribution has the constant transform 1.
    CHECK(run_cli("transform --op s " + d + "fac.json -o " + d + "s_fac.json") == 0);
    const json s_fac = json::parse(read_file(dir / "s_fac.json"));
    CHECK(s_fac.at("kind") == "s");
    const auto s_series = series2_from_json<Rational>(s_fac);
    for (Index p = 0; p <= s_series.order(); ++p)
        for (Index q = 0; q <= s_series.order(); ++q)
            CHECK(s_series(p, q) == ((p == 0 && q == 0) ? Q(1) : Q(0)));

    // Point-mass product through the CLI.
    write_file(dir / "pa.json", R"({"order": 4, "atoms": [["2","3","1"]]})");
    write_file(dir / "pb.json", R"({"order": 4, "atoms": [["1/2","-2","1"]]})");
    CHECK(run_cli("convolve --op bbmult " + d + "pa.json " + d + "pb.json -o " +
                  d + "pp.json") == 0);
    CHECK(two_band_from_json<Rational>(json::parse(read_file(dir / "pp.json"))) ==
          TwoBand<Rational>::point_mass(Q(1), Q(-6), 3));

    // Theorem check as an end-to-end run: oracle and convolve give identical
    // files once the orders line up.
    CHECK(run_cli("convolve --op bpmult --order 5 " + d + "mu.json " + d +
                  "nu.json -o " + d + "conv.json") == 0);
    CHECK(run_cli("oracle --op bpmult --pmax 4 --qmax 4 " + d + "mu.json " + d +
                  "nu.json -o " + d + "orac.json") == 0);
    CHECK(read_file(dir / "conv.json") == read_file(dir / "orac.json"));

    // Determinism: byte-identical output on a rerun.
    CHECK(run_cli("convolve --op bpmult --order 5 " + d + "mu.json " + d +
                  "nu.json -o " + d + "conv2.json") == 0);
    CHECK(read_file(dir / "conv.json") == read_file(dir / "conv2.json"));

    // The reduced R-transform of the mixed pair: zero boundary rows and the
    // covariance m11 - m10*m01 = 1/2 at (1,1).
    CHECK(run_cli("transform --op rtilde " + d + "mu.json -o " + d + "rt.json") == 0);
    const auto rt = series2_from_json<Rational>(json::parse(read_file(dir / "rt.json")));
    CHECK(rt(1, 1) == Q(1, 2));
    for (Index k = 0; k <= rt.order(); ++k) CHECK(rt(0, k) == 0);

    // Float mode runs the same pipeline on complex doubles.
    CHECK(run_cli("transform --op t --mode float " + d + "mu.json -o " + d +
                  "t_float.json") == 0);
    const auto t_float =
        series2_from_json<Complex>(json::parse(read_file(dir / "t_float.json")));
    CHECK(std::abs(t_float(0, 0) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("cli: exit codes distinguish parse, precondition and internal errors") {
    REQUIRE_MESSAGE(!cli_path().empty(), "BIFREE_BIN must point at the CLI binary");
    const fs::path dir = scratch_dir();
    const std::string d = dir.string() + "/";
    write_file(dir / "zero_mean.json",
               R"({"order": 3, "atoms": [["-1","1","1/2"],["1","1","1/2"]]})");
    write_file(dir / "bad.json", "{ not json");
    write_file(dir / "tiny.json", R"({"order": 2, "atoms": [["1","1","1"]]})");

    CHECK(run_cli("transform --op s " + d + "zero_mean.json") == 2);
    CHECK(run_cli("transform --op t " + d + "zero_mean.json") == 0);  // left mean free
    CHECK(run_cli("transform --op s " + d + "bad.json") == 1);
    CHECK(run_cli("transform --op s " + d + "nonexistent.json") == 1);
    CHECK(run_cli("transform --badflag") == 1);  // usage error
    // Oracle on undersized inputs violates the degree precondition.
    CHECK(run_cli("oracle --op bbmult --pmax 4 --qmax 4 " + d + "tiny.json " + d +
                  "tiny.json") == 2);
}
