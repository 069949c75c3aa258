#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "geodesic/cli.hpp"
#include "geodesic/correlation.hpp"
#include "geodesic/local_factors.hpp"

using namespace geodesic::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("geodesic-test-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

}  // namespace

TEST_CASE("cache entries are validated") {
    CHECK_NOTHROW(validate({5, 3, 1, 1}));
    CHECK_NOTHROW(validate({8, 6, 2, 1}));
    CHECK_THROWS_AS(validate({5, 4, 1, 1}), CacheError);
    CHECK_THROWS_AS(validate({5, 3, 1, 0}), CacheError);
    CHECK_THROWS_AS(validate({9, 3, 1, 1}), CacheError);
}

TEST_CASE("cache round-trip") {
    TempDir tmp;
    const auto path = tmp.path / "sub" / "cache.txt";
    CHECK(read_cache(path).empty());
    const std::vector<CacheEntry> entries = {{12, 4, 1, 2}, {5, 3, 1, 1}, {8, 6, 2, 1}, {5, 3, 1, 1}};
    write_cache(path, entries);
    const auto back = read_cache(path);
    CHECK(back == std::vector<CacheEntry>{{5, 3, 1, 1}, {8, 6, 2, 1}, {12, 4, 1, 2}});
    CHECK(slurp(path) == "# geodesic-cache v1\n5,3,1,1\n8,6,2,1\n12,4,1,2\n");
    CHECK_FALSE(fs::exists(tmp.path / "sub" / "cache.txt.tmp"));
}

TEST_CASE("corrupt cache lines are reported with their line number") {
    TempDir tmp;
    const auto path = tmp.path / "c.txt";
    spit(path, "# geodesic-cache v1\n5,3,1,1\n8,6,2\n");
    try {
        read_cache(path);
        FAIL("expected CacheError");
    } catch (const CacheError& e) {
        CHECK(std::string(e.what()).find("c.txt:3:") != std::string::npos);
    }
    spit(path, "# geodesic-cache v1\n5,3,1,1\n\n12,5,1,2\n");
    CHECK_THROWS_WITH_AS(read_cache(path), doctest::Contains(":4:"), CacheError);
    spit(path, "5,3,1,1\n");
    CHECK_THROWS_WITH_AS(read_cache(path), doctest::Contains(":1:"), CacheError);
    spit(path, "# geodesic-cache v1\n5,3,x,1\n");
    CHECK_THROWS_AS(read_cache(path), CacheError);
}

TEST_CASE("cache path resolution") {
    CHECK(resolve_cache_path(std::string("a.txt")) == fs::path("a.txt"));
    ::setenv(kCacheEnv, "/tmp/env-cache.txt", 1);
    CHECK(resolve_cache_path(std::nullopt) == fs::path("/tmp/env-cache.txt"));
    CHECK(resolve_cache_path(std::string("b.txt")) == fs::path("b.txt"));
    ::unsetenv(kCacheEnv);
    CHECK_FALSE(resolve_cache_path(std::nullopt).has_value());
}

TEST_CASE("alpha CSV") {
    TempDir tmp;
    const auto out = tmp.path / "alpha.csv";
    std::ostringstream log;
    CHECK(cmd_alpha(3, out.string(), std::nullopt, log) == kExitOk);
    CHECK(slurp(out) == "n,g,alpha\n3,1,0.366204096223\n");
    CHECK_THROWS_AS(cmd_alpha(2, out.string(), std::nullopt, log), UsageError);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-1234567.891) == "-1234567.891");
}

TEST_CASE("alpha with a warm cache is identical") {
    TempDir tmp;
    const auto cache = tmp.path / "cache.txt";
    const auto a = tmp.path / "a.csv", b = tmp.path / "b.csv";
    std::ostringstream log1, log2;
    cmd_alpha(600, a.string(), cache, log1);
    const auto entries = read_cache(cache);
    CHECK_FALSE(entries.empty());
    cmd_alpha(600, b.string(), cache, log2);
    CHECK(slurp(a) == slurp(b));
    CHECK(log2.str().find(" " + std::to_string(entries.size()) + " class numbers from cache") != std::string::npos);
    CHECK(read_cache(cache) == entries);
}

TEST_CASE("predict CSV round-trips") {
    std::ostringstream out;
    write_predict_csv(out, 3, 500, 6);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,gamma_predicted,tail_bound");
    for (std::uint64_t r = 0; r <= 3; ++r) {
        REQUIRE(std::getline(in, line));
        std::uint64_t rr;
        double g, t;
        char c1, c2;
        std::istringstream fields(line);
        fields >> rr >> c1 >> g >> c2 >> t;
        CHECK(rr == r);
        const auto pred = geodesic::local::euler_product_gamma(r, 500, 6);
        CHECK(g == doctest::Approx(pred.gamma).epsilon(1e-11));
        CHECK(t == doctest::Approx(pred.tail).epsilon(1e-11));
    }
    CHECK_FALSE(std::getline(in, line));
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_predict(3, 1, 6, "-", log), UsageError);
}

TEST_CASE("doubling the prime limit stays inside the reported tail") {
    const auto a = geodesic::local::euler_product_gamma(2, 2000, 8);
    const auto b = geodesic::local::euler_product_gamma(2, 4000, 8);
    CHECK(std::abs(a.gamma - b.gamma) < a.tail);
}

TEST_CASE("compare JSON") {
    TempDir tmp;
    const auto out = tmp.path / "cmp.json";
    std::ostringstream log;
    CHECK(cmd_compare(2, 400, 300, 5, out.string(), std::nullopt, log) == kExitOk);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["meta"]["r_max"] == 2);
    CHECK(doc["meta"]["max_n"] == 400);
    CHECK(doc["meta"]["prime_limit"] == 300);
    CHECK(doc["meta"]["b_cap"] == 5);
    CHECK(doc["meta"]["version"].is_string());
    const auto& reports = doc["reports"];
    REQUIRE(reports.size() == 3);
    const auto lib = geodesic::correlation::compare_report(2, 400, 300, 5);
    for (std::size_t r = 0; r < 3; ++r) {
        const auto& j = reports[r];
        CHECK(j.size() == 7);
        CHECK(j["r"] == r);
        CHECK(j["N"] == 400);
        CHECK(j["empirical"].get<double>() == lib[r].empirical);
        CHECK(j["predicted"].get<double>() == lib[r].predicted);
        CHECK(j["predicted_tail"].get<double>() == lib[r].predicted_tail);
        CHECK(j["prime_limit"] == 300);
        CHECK(j["b_cap"] == 5);
    }
    CHECK(cmd_compare(0, 50, 30, 2, out.string(), std::nullopt, log) == kExitOk);
    CHECK(nlohmann::json::parse(slurp(out))["reports"].size() == 1);
    CHECK_THROWS_AS(cmd_compare(0, 2, 30, 2, out.string(), std::nullopt, log), UsageError);
}

TEST_CASE("verify suites") {
    std::ostringstream out;
    CHECK(cmd_verify("gauss", out) == kExitOk);
    CHECK(out.str().find("PASS") != std::string::npos);
    CHECK(out.str().find("FAIL") == std::string::npos);
    CHECK_THROWS_AS(run_suite("bogus"), UsageError);
    CHECK(suite_names().size() == 5);
    for (const auto& name : {"fourier", "lemma41"}) {
        for (const auto& c : run_suite(name)) {
            CAPTURE(c.name);
            CHECK(c.pass);
        }
    }
}
