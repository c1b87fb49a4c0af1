#include "doctest.h"

#include "symcool/config.hpp"
#include "symcool/tools/io.hpp"
#include "symcool/tools/scenarios.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

using namespace symcool;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char *name)
{
    auto p = fs::temp_directory_path() / "symcool-unit" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}

TEST_SUITE("tools") {

TEST_CASE("number formatting round-trips")
{
    for (double v: {0.0, 1.0, -2.5, 0.1, 1e-300, 6.02214076e23, 2.0 / 3.0, 111.00512345678912})
        CHECK(std::stod(tools::format_number(v)) == v);
    CHECK(tools::format_number(0.1) == "0.1");
    CHECK(tools::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("CSV roundtrip keeps names, units and values")
{
    auto dir = scratch("csv");
    std::vector<double> a{1, 2.5, 1.0 / 3}, b{-1e-9, 0, 7};
    tools::write_csv(dir / "t.csv", {{"t", "s"}, {"x_m", "m"}},
                     {std::span<const double>(a), std::span<const double>(b)});
    auto table = tools::read_csv(dir / "t.csv");
    CHECK(table.header == std::vector<std::string>{"t[s]", "x_m[m]"});
    CHECK(table.column("t") == a);
    CHECK(table.column("x_m") == b);
    CHECK_THROWS(table.index("nope"));

    std::vector<double> shorter{1};
    CHECK_THROWS(tools::write_csv(dir / "bad.csv", {{"a", "1"}, {"b", "1"}},
                                  {std::span<const double>(a), std::span<const double>(shorter)}));
}

TEST_CASE("seed ranges")
{
    CHECK(tools::parse_seed_range("1..20").list().size() == 20);
    CHECK(tools::parse_seed_range("7").list() == std::vector<uint64_t>{7});
    auto r = tools::parse_seed_range("3..5");
    CHECK(r.list() == std::vector<uint64_t>{3, 4, 5});
    CHECK_THROWS(tools::parse_seed_range("5..3"));
    CHECK_THROWS(tools::parse_seed_range("x"));
}

TEST_CASE("parallel_map keeps index order and forwards exceptions")
{
    for (unsigned threads: {1u, 3u}) {
        auto out = tools::parallel_map(100, [] (size_t i) { return i * i; }, threads);
        REQUIRE(out.size() == 100);
        for (size_t i = 0; i < out.size(); i++)
            CHECK(out[i] == i * i);
    }
    std::atomic<int> calls{0};
    CHECK_THROWS_AS(tools::parallel_map(
                        10,
                        [&] (size_t i) {
                            calls++;
                            if (i == 4)
                                throw std::runtime_error("boom");
                            return int(i);
                        },
                        2),
                    std::runtime_error);
    CHECK(tools::parallel_map(0, [] (size_t i) { return i; }).empty());
}

TEST_CASE("manifest is deterministic and hashes its inputs")
{
    auto d1 = scratch("m1"), d2 = scratch("m2");
    for (auto &d: {d1, d2}) {
        std::ofstream(d / "out.csv") << "a[1]\n1\n";
        tools::Manifest m("unit");
        m.add_input("config", "x = 1");
        m.add_output(d / "out.csv");
        m.write(d);
    }
    CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));

    tools::Manifest a("s"), b("s");
    a.add_input("config", "x = 1");
    b.add_input("config", "x = 2");
    CHECK(a.input_hash() != b.input_hash());
    CHECK(tools::hex64(tools::fnv1a("")) == "cbf29ce484222325");
}

TEST_CASE("forward calibration grid")
{
    auto c = load_config(std::string(SYMCOOL_CONFIG_DIR) + "/paper-baseline.cfg", "2a");
    auto p = tools::calibration_defaults(c);
    auto clean = tools::forward_calibration(p, c.membrane.Gamma_m, 1e-3, 2e-2, 20, 0, 1);
    REQUIRE(clean.P_tot.size() == 20);
    CHECK(clean.P_tot.front() == doctest::Approx(1e-3));
    CHECK(clean.P_tot.back() == doctest::Approx(2e-2));
    CHECK(clean.P_tot[1] / clean.P_tot[0] == doctest::Approx(clean.P_tot[19] / clean.P_tot[18]));
    auto n1 = tools::forward_calibration(p, c.membrane.Gamma_m, 1e-3, 2e-2, 20, 0.05, 9);
    auto n2 = tools::forward_calibration(p, c.membrane.Gamma_m, 1e-3, 2e-2, 20, 0.05, 9);
    CHECK(n1.T_opt == n2.T_opt);
    CHECK(n1.T_opt != clean.T_opt);
}

}
