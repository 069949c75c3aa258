#include "geodesic/correlation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "geodesic/core_arith.hpp"
#include "geodesic/local_factors.hpp"

namespace geodesic::correlation {

namespace {

using arith::i128;

void require_rows(std::span<const spectrum::SpectrumRow> rows, std::uint64_t last) {
    if (last < 3 || rows.size() < last - 2)
        throw std::invalid_argument("rows do not cover n = " + std::to_string(last));
}

void require_N(std::uint64_t N) {
    if (N < 3) throw std::invalid_argument("N must be at least 3");
}

i128 mod_floor(i128 a, i128 m) {
    const i128 r = a % m;
    return r < 0 ? r + m : r;
}

i128 inverse_mod(i128 x, i128 m) {
    i128 g = m, r = mod_floor(x, m), s0 = 0, s1 = 1;
    while (r != 0) {
        const i128 q = g / r;
        const i128 t = g - q * r;
        g = r;
        r = t;
        const i128 u = s0 - q * s1;
        s0 = s1;
        s1 = u;
    }
    if (g != 1) throw std::invalid_argument("not invertible");
    return mod_floor(s0, m);
}

}  // namespace

double empirical_gamma(std::span<const spectrum::SpectrumRow> rows, std::uint64_t r, std::uint64_t N) {
    require_N(N);
    require_rows(rows, N + r);
    double sum = 0.0;
    for (std::uint64_t n = 3; n <= N; ++n) sum += rows[n - 3].alpha_tilde * rows[n + r - 3].alpha_tilde;
    return sum / static_cast<double>(N);
}

double empirical_mean(std::span<const spectrum::SpectrumRow> rows, std::uint64_t N) {
    require_N(N);
    require_rows(rows, N);
    double sum = 0.0;
    for (std::uint64_t n = 3; n <= N; ++n) sum += rows[n - 3].alpha;
    return sum / static_cast<double>(N);
}

Complex empirical_fourier(std::span<const spectrum::SpectrumRow> rows, std::uint64_t N, std::int64_t a,
                          std::uint64_t b) {
    require_N(N);
    require_rows(rows, N);
    if (b == 0) throw std::invalid_argument("empirical_fourier: b must be positive");
    const auto ib = static_cast<i128>(b);
    if (std::gcd(static_cast<std::uint64_t>(mod_floor(a, ib)), b) != 1)
        throw std::invalid_argument("empirical_fourier: gcd(a, b) must be 1");
    const auto ab = static_cast<std::uint64_t>(mod_floor(a, ib));
    Complex sum = 0.0;
    for (std::uint64_t n = 3; n <= N; ++n) {
        const auto t = static_cast<std::uint64_t>((static_cast<i128>(ab) * n) % ib);
        const double angle = -2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(b);
        sum += rows[n - 3].alpha * Complex(std::cos(angle), std::sin(angle));
    }
    return sum / static_cast<double>(N);
}

std::vector<CorrelationReport> compare_report(const spectrum::Spectrum& spec, std::uint64_t r_max, std::uint64_t N,
                                              std::uint64_t prime_limit, unsigned b_cap) {
    require_N(N);
    if (prime_limit < 2 || b_cap < 1) throw std::invalid_argument("compare_report: parameters must be positive");
    require_rows(spec.rows(), N + r_max);
    std::vector<CorrelationReport> out(r_max + 1);
    const auto count = static_cast<std::int64_t>(r_max + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < count; ++r) {
        const auto pred = local::euler_product_gamma(static_cast<std::uint64_t>(r), prime_limit, b_cap);
        out[r] = {static_cast<std::uint64_t>(r),
                  N,
                  empirical_gamma(spec.rows(), static_cast<std::uint64_t>(r), N),
                  pred.gamma,
                  pred.tail,
                  prime_limit,
                  b_cap};
    }
    return out;
}

std::vector<CorrelationReport> compare_report(std::uint64_t r_max, std::uint64_t N, std::uint64_t prime_limit,
                                              unsigned b_cap, const spectrum::SieveOptions& options) {
    require_N(N);
    const auto spec = spectrum::spectrum_sieve(N + r_max, options);
    return compare_report(spec, r_max, N, prime_limit, b_cap);
}

std::vector<LocalFrequency> split_frequency(std::int64_t a, std::uint64_t b) {
    if (b == 0) throw std::invalid_argument("split_frequency: b must be positive");
    const auto ib = static_cast<i128>(b);
    if (std::gcd(static_cast<std::uint64_t>(mod_floor(a, ib)), b) != 1)
        throw std::invalid_argument("split_frequency: gcd(a, b) must be 1");
    std::vector<LocalFrequency> out;
    for (const auto& [p128, e] : arith::factorize(b).factors) {
        const auto p = static_cast<std::uint64_t>(p128);
        i128 q = 1;
        for (int i = 0; i < e; ++i) q *= static_cast<i128>(p);
        // a_p (b / p^c) = a (mod p^c)
        const i128 ap = mod_floor(static_cast<i128>(a) * inverse_mod(ib / q, q), q);
        out.push_back({p, static_cast<unsigned>(e), static_cast<std::int64_t>(ap)});
    }
    return out;
}

bool splits(std::span<const LocalFrequency> parts, std::int64_t a, std::uint64_t b) {
    if (b == 0) return false;
    std::set<std::uint64_t> seen;
    i128 prod = 1;
    for (const auto& f : parts) {
        if (!arith::is_prime(f.p) || !seen.insert(f.p).second) return false;
        if (f.c == 0 || f.a % static_cast<std::int64_t>(f.p) == 0) return false;
        for (unsigned i = 0; i < f.c; ++i) prod *= static_cast<i128>(f.p);
        if (prod > static_cast<i128>(b)) return false;
    }
    if (prod != static_cast<i128>(b)) return false;
    const auto ib = static_cast<i128>(b);
    i128 sum = 0;
    for (const auto& f : parts) {
        i128 q = 1;
        for (unsigned i = 0; i < f.c; ++i) q *= static_cast<i128>(f.p);
        sum = mod_floor(sum + static_cast<i128>(f.a) * (ib / q), ib);
    }
    return sum == mod_floor(a, ib);
}

Complex predicted_fourier(std::span<const LocalFrequency> parts) {
    Complex prod = 1.0;
    for (const auto& f : parts)
        prod *= f.p == 2 ? local::fourier_beta_p_dft(2, f.a, f.c).value : local::fourier_beta_p_closed(f.p, f.a, f.c);
    return prod;
}

}  // namespace geodesic::correlation
