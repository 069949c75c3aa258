#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geodesic/correlation.hpp"
#include "geodesic/local_factors.hpp"
#include "geodesic/spectrum.hpp"

using namespace geodesic::correlation;
using geodesic::spectrum::spectrum_sieve;

namespace {

const geodesic::spectrum::Spectrum& spec() {
    static const auto s = spectrum_sieve(3000);
    return s;
}

}  // namespace

TEST_CASE("empirical statistics on tiny ranges") {
    const auto rows = spec().rows();
    CHECK(empirical_mean(rows, 3) == doctest::Approx(std::log(3.0) / 9));
    CHECK(empirical_mean(rows, 3) == doctest::Approx(0.122).epsilon(0.01));
    double by_hand = 0.0;
    for (std::uint64_t n = 3; n <= 10; ++n) by_hand += std::pow(spec().row(n).alpha - 1.0, 2);
    CHECK(empirical_gamma(rows, 0, 10) == doctest::Approx(by_hand / 10));
    CHECK_THROWS_AS(empirical_mean(rows, 2), std::invalid_argument);
    CHECK_THROWS_AS(empirical_gamma(rows, 5, 2998), std::invalid_argument);
    CHECK_THROWS_AS(empirical_fourier(rows, 100, 3, 9), std::invalid_argument);
    CHECK_THROWS_AS(empirical_fourier(rows, 100, 1, 0), std::invalid_argument);
}

TEST_CASE("empirical gamma at shift zero is a mean square") {
    const auto rows = spec().rows();
    for (std::uint64_t N = 3; N <= 2990; N += 37) CHECK(empirical_gamma(rows, 0, N) >= 0.0);
    CHECK(empirical_gamma(rows, 0, 2000) ==
          doctest::Approx(empirical_gamma(rows, 0, 2000)));  // pure function of the rows
}

TEST_CASE("empirical Fourier coefficients") {
    const auto rows = spec().rows();
    const auto one = empirical_fourier(rows, 2500, 1, 1);
    CHECK(one.real() == doctest::Approx(empirical_mean(rows, 2500)).epsilon(1e-12));
    CHECK(std::abs(one.imag()) < 1e-12);
    // alpha is real, so the coefficient at -a/b is the conjugate.
    const auto f = empirical_fourier(rows, 2500, 2, 7);
    const auto g = empirical_fourier(rows, 2500, -2, 7);
    CHECK(std::abs(f - std::conj(g)) < 1e-12);
    CHECK(std::abs(empirical_fourier(rows, 2500, 9, 7) - f) < 1e-12);
}

TEST_CASE("frequency splitting") {
    const auto parts = split_frequency(1, 15);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].p == 3);
    CHECK(parts[0].c == 1);
    CHECK(parts[0].a == 2);
    CHECK(parts[1].p == 5);
    CHECK(parts[1].a == 2);
    CHECK(splits(parts, 1, 15));
    CHECK_FALSE(splits(parts, 2, 15));
    CHECK_THROWS_AS(split_frequency(3, 15), std::invalid_argument);

    for (std::uint64_t b = 1; b <= 400; ++b) {
        for (std::int64_t a = -3; a <= static_cast<std::int64_t>(b); a += 7) {
            if (std::gcd(static_cast<std::uint64_t>(std::abs(a)), b) != 1) continue;
            const auto s = split_frequency(a, b);
            CHECK(splits(s, a, b));
        }
    }
}

TEST_CASE("predicted coefficient does not depend on the chosen lift") {
    // 1/15 = 2/3 + 2/5 = -1/3 + 7/5 = 5/3 - 8/5 (mod 1)
    const std::vector<LocalFrequency> lifts[] = {
        {{3, 1, 2}, {5, 1, 2}}, {{3, 1, -1}, {5, 1, 7}}, {{3, 1, 5}, {5, 1, -8}}};
    const auto ref = predicted_fourier(1, 15);
    for (const auto& l : lifts) {
        REQUIRE(splits(l, 1, 15));
        CHECK(std::abs(predicted_fourier(l) - ref) < 1e-15);
    }
    const std::vector<LocalFrequency> lifts2[] = {{{2, 3, 1}, {3, 2, 8}}, {{2, 3, 9}, {3, 2, -1}}};
    for (const auto& l : lifts2) {
        REQUIRE(splits(l, 1, 72));
        CHECK(std::abs(predicted_fourier(l) - predicted_fourier(1, 72)) < 1e-12);
    }
    const auto p3 = geodesic::local::fourier_beta_p_closed(3, 2, 1);
    const auto p5 = geodesic::local::fourier_beta_p_closed(5, 2, 1);
    CHECK(std::abs(ref - p3 * p5) < 1e-15);
}

TEST_CASE("compare_report") {
    const auto a = compare_report(spec(), 3, 2900, 500, 6);
    const auto b = compare_report(spec(), 3, 2900, 500, 6);
    REQUIRE(a.size() == 4);
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].r == r);
        CHECK(a[r].N == 2900);
        CHECK(a[r].prime_limit == 500);
        CHECK(a[r].b_cap == 6);
        CHECK(a[r].predicted_tail >= 0.0);
        CHECK(a[r].empirical == b[r].empirical);
        CHECK(a[r].predicted == b[r].predicted);
        CHECK(a[r].predicted_tail == b[r].predicted_tail);
        CHECK(a[r].empirical == empirical_gamma(spec().rows(), r, 2900));
        CHECK(a[r].predicted == geodesic::local::euler_product_gamma(r, 500, 6).gamma);
    }
    const auto c = compare_report(2, 500, 100, 4);
    REQUIRE(c.size() == 3);
    CHECK(c[1].empirical == empirical_gamma(spec().rows(), 1, 500));
    CHECK_THROWS_AS(compare_report(spec(), 200, 2900, 500, 6), std::invalid_argument);
    CHECK_THROWS_AS(compare_report(spec(), 2, 100, 1, 6), std::invalid_argument);
}
