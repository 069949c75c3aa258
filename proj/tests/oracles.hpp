#pragma once

// Slow, obviously-correct reference routines used only by the tests.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, int>> trial_factor(std::uint64_t m) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

inline bool is_square(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r * r == x;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    for (; e; e >>= 1, b = b * b % m)
        if (e & 1) r = r * b % m;
    return r;
}

// Euler's criterion; p an odd prime below 2^32.
inline int euler_legendre(std::int64_t a, std::uint64_t p) {
    const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                              static_cast<std::int64_t>(p));
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// chi_d(m) from its values at primes.
inline int kronecker(std::int64_t d, std::int64_t m) {
    if (m < 0) m = -m;
    if (m == 0) return 0;
    int v = 1;
    for (const auto& [p, e] : trial_factor(static_cast<std::uint64_t>(m))) {
        int c;
        if (p == 2) {
            const auto r = ((d % 8) + 8) % 8;
            c = (r % 4 == 0) ? 0 : (r == 1 ? 1 : -1);
        } else {
            c = euler_legendre(d, p);
        }
        for (int i = 0; i < e; ++i) v *= c;
    }
    return v;
}

// Smallest v >= 1 with d v^2 + 4 a square, giving (u, v); (0, 0) if none has v <= v_max.
inline std::pair<std::uint64_t, std::uint64_t> brute_pell(std::uint64_t d, std::uint64_t v_max = 1'000'000) {
    for (std::uint64_t v = 1; v <= v_max; ++v) {
        const std::uint64_t w = d * v * v + 4;
        if (is_square(w)) {
            auto u = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<long double>(w))));
            while (u * u > w) --u;
            while ((u + 1) * (u + 1) <= w) ++u;
            return {u, v};
        }
    }
    return {0, 0};
}

struct Form {
    std::int64_t a, b, c;
};

// Direct scan of 0 < b < sqrt d, sqrt d - b < 2|a| < sqrt d + b.
inline std::vector<Form> brute_reduced(std::int64_t d) {
    std::vector<Form> out;
    const double r = std::sqrt(static_cast<double>(d));
    for (std::int64_t b = 1; b < r; ++b) {
        for (std::int64_t a = -static_cast<std::int64_t>(r) - b; a <= static_cast<std::int64_t>(r) + b; ++a) {
            if (a == 0) continue;
            const double twoa = 2.0 * static_cast<double>(a < 0 ? -a : a);
            if (!(r - static_cast<double>(b) < twoa && twoa < r + static_cast<double>(b))) continue;
            const std::int64_t num = b * b - d;
            if (num % (4 * a) != 0) continue;
            const std::int64_t c = num / (4 * a);
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

// The defining finite sum over d v^2 = n^2 - 4 with prime factors of v at most P.
inline double beta_P_definition(std::uint64_t P, std::uint64_t n) {
    const std::uint64_t m = n * n - 4;
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= P; ++p)
        if (trial_factor(p).size() == 1 && trial_factor(p)[0].second == 1) primes.push_back(p);
    double sum = 0.0;
    for (std::uint64_t v = 1; v * v <= m; ++v) {
        if (m % (v * v) != 0) continue;
        const std::uint64_t d = m / (v * v);
        if (d % 4 != 0 && d % 4 != 1) continue;
        bool smooth = true;
        for (const auto& [q, e] : trial_factor(v))
            if (q > P) smooth = false;
        if (!smooth) continue;
        double prod = 1.0;
        for (std::uint64_t p : primes) prod /= 1.0 - kronecker(static_cast<std::int64_t>(d), static_cast<std::int64_t>(p)) / static_cast<double>(p);
        sum += prod / static_cast<double>(v);
    }
    return sum;
}

}  // namespace oracle
