#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "geodesic/errors.hpp"
#include "geodesic/quad_forms.hpp"
#include "geodesic/spectrum.hpp"
#include "oracles.hpp"

using namespace geodesic::spectrum;
using geodesic::forms::class_number_oracle;
using geodesic::forms::pell_fundamental;

namespace {

std::vector<std::pair<std::uint64_t, std::uint64_t>> dv(const TraceDecomposition& t) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const auto& e : t.entries) out.emplace_back(e.d, e.v);
    std::sort(out.begin(), out.end());
    return out;
}

const Spectrum& spec2000() {
    static const Spectrum s = spectrum_sieve(2000);
    return s;
}

}  // namespace

TEST_CASE("trace decompositions") {
    using V = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
    CHECK(dv(trace_decompositions(3)) == V{{5, 1}});
    CHECK(dv(trace_decompositions(4)) == V{{12, 1}});
    CHECK(dv(trace_decompositions(6)) == V{{8, 2}, {32, 1}});
    CHECK_THROWS_AS(trace_decompositions(2), std::invalid_argument);
}

TEST_CASE("trace decompositions are exhaustive, with non-square cofactors") {
    for (std::uint64_t n = 3; n <= 3000; ++n) {
        const std::uint64_t m = n * n - 4;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> expect;
        for (std::uint64_t v = 1; v * v <= m; ++v) {
            if (m % (v * v)) continue;
            const std::uint64_t d = m / (v * v);
            if (d % 4 == 0 || d % 4 == 1) expect.emplace_back(d, v);
        }
        std::sort(expect.begin(), expect.end());
        const auto t = trace_decompositions(n);
        CHECK(dv(t) == expect);
        for (const auto& e : t.entries) CHECK_FALSE(oracle::is_square(e.d));
    }
}

TEST_CASE("first rows of the spectrum") {
    const auto s = spectrum_sieve(3);
    REQUIRE(s.rows().size() == 1);
    CHECK(s.row(3).g == 1);
    CHECK(s.row(3).alpha == doctest::Approx(std::log(3.0) / 3));
    CHECK(s.row(3).alpha_tilde == doctest::Approx(s.row(3).alpha - 1));
    CHECK_THROWS_AS(spectrum_sieve(2), std::invalid_argument);

    const auto& big = spec2000();
    const auto e9 = big.decomposition(9);
    REQUIRE(e9.size() == 1);
    CHECK(e9[0].d == 77);
    CHECK(e9[0].fundamental);
    CHECK(big.row(9).g == class_number_oracle(77));
    // 7^2 - 4 = 45 = 5 * 3^2, and 5 first appears at n = 3.
    bool saw5 = false;
    for (const auto& e : big.decomposition(7))
        if (e.d == 5) {
            saw5 = true;
            CHECK_FALSE(e.fundamental);
        }
    CHECK(saw5);
}

TEST_CASE("fundamental flags agree with the continued fraction for n <= 500") {
    const auto& s = spec2000();
    for (std::uint64_t n = 3; n <= 500; ++n) {
        for (const auto& e : s.decomposition(n)) {
            const auto f = pell_fundamental(e.d, geodesic::forms::u128(1) << 100);
            CHECK(e.fundamental == (f.u == n));
        }
    }
}

TEST_CASE("row invariants") {
    const auto& s = spec2000();
    std::map<std::uint64_t, std::uint64_t> h;
    for (const auto& u : s.units()) h[u.d] = u.h;
    for (const auto& row : s.rows()) {
        CHECK(row.g >= 1);
        CHECK(row.alpha == std::log(static_cast<double>(row.n)) * static_cast<double>(row.g) / static_cast<double>(row.n));
        CHECK(row.alpha_tilde == row.alpha - 1.0);
        std::uint64_t g = 0;
        bool whole = false;
        for (const auto& e : s.decomposition(row.n)) {
            if (!e.fundamental) continue;
            g += h.at(e.d);
            if (e.v == 1) whole = true;
        }
        CHECK(g == row.g);
        CHECK(whole);
        CHECK(row.g >= h.at(row.n * row.n - 4));
    }
}

TEST_CASE("units carry the sieve's class numbers") {
    const auto& s = spec2000();
    std::size_t checked = 0;
    for (const auto& u : s.units()) {
        CHECK(u.u * u.u - u.d * u.v * u.v == 4);
        if (u.d <= 20000) {
            CHECK(u.h == class_number_oracle(u.d));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("serial and parallel sieves agree") {
    SieveOptions serial;
    serial.execution = Execution::serial;
    const auto a = spectrum_sieve(1500, serial);
    const auto b = spectrum_sieve(1500);
    REQUIRE(a.rows().size() == b.rows().size());
    for (std::size_t i = 0; i < a.rows().size(); ++i) {
        CHECK(a.rows()[i].g == b.rows()[i].g);
        CHECK(a.rows()[i].alpha == b.rows()[i].alpha);
    }
    const std::vector<std::uint64_t> ds = {5, 8, 12, 13, 21, 229, 1001, 999'997, 12'345'677};
    CHECK(class_numbers(ds, Execution::serial) == class_numbers(ds, Execution::parallel));
}

TEST_CASE("known class numbers are reused") {
    const auto base = spectrum_sieve(400);
    KnownClassNumbers known;
    for (const auto& u : base.units()) known.emplace(u.d, u.h);
    SieveOptions opt;
    opt.known = &known;
    const auto again = spectrum_sieve(400, opt);
    CHECK(again.reused_class_numbers() == base.units().size());
    for (std::size_t i = 0; i < base.rows().size(); ++i) CHECK(again.rows()[i].g == base.rows()[i].g);
}

TEST_CASE("memory budget is enforced") {
    SieveOptions opt;
    opt.memory_budget = 1024;
    CHECK_THROWS_AS(spectrum_sieve(5000, opt), geodesic::ResourceError);
}

TEST_CASE("beta from the smoothed series") {
    CHECK(beta(3, 4096) == doctest::Approx(0.430409).epsilon(1e-3));
    using geodesic::forms::smoothed_L;
    CHECK(beta(6, 512) == doctest::Approx(smoothed_L(32, 512) + 0.5 * smoothed_L(8, 512)));
    const auto& s = spec2000();
    for (std::uint64_t n = 3; n <= 60; ++n) CHECK(beta(n, 1 << 16) == doctest::Approx(beta_from_units(s, n)).epsilon(2e-3));
}

TEST_CASE("alpha - beta shrinks over dyadic blocks") {
    SieveOptions opt;
    const auto s = spectrum_sieve(1u << 14, opt);
    std::vector<double> avg;
    for (std::uint64_t lo = 4; lo < (1u << 14); lo *= 2) {
        double sum = 0.0;
        for (std::uint64_t n = lo + 1; n <= 2 * lo; ++n) sum += std::abs(s.row(n).alpha - beta_from_units(s, n));
        avg.push_back(sum / static_cast<double>(lo));
    }
    for (std::size_t i = 1; i < avg.size(); ++i) CHECK(avg[i] <= 1.1 * avg[i - 1]);
    CHECK(avg.back() < 0.5 * avg.front());

    // Entry counts grow linearly.
    auto count = [&](std::uint64_t x) {
        std::size_t c = 0;
        for (std::uint64_t n = 3; n <= x; ++n) c += s.decomposition(n).size();
        return static_cast<double>(c) / static_cast<double>(x);
    };
    CHECK(std::abs(count(1u << 14) / count(1u << 13) - 1.0) < 0.1);
}
