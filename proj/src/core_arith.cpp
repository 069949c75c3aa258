#include "geodesic/core_arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace geodesic::arith {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;
constexpr u128 kTwo64 = u128(1) << 64;

u128 mul_mod(u128 a, u128 b, u128 m) {
    if (m <= kTwo64) return (a * b) % m;
    // m <= 2^96 here, so 2*result never overflows.
    u128 result = 0;
    a %= m;
    for (int bit = 127; bit >= 0; --bit) {
        result <<= 1;
        if (result >= m) result -= m;
        if ((b >> bit) & 1) {
            result += a;
            if (result >= m) result -= m;
        }
    }
    return result;
}

u128 pow_mod128(u128 base, u128 exp, u128 m) {
    u128 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_witness(u128 n, u128 a, u128 d, int r) {
    u128 x = pow_mod128(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Pollard-Brent; n is odd, composite and has no factor below the trial limit.
u128 pollard_brent(u128 n) {
    for (u128 c = 1;; ++c) {
        u128 y = 2, x = 2, ys = 2, q = 1, g = 1;
        const u128 block = 128;
        u128 len = 1;
        auto step = [&](u128 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u128 i = 0; i < len; ++i) y = step(y);
            u128 k = 0;
            do {
                ys = y;
                for (u128 i = 0; i < std::min(block, len - k); ++i) {
                    y = step(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = gcd128(q, n);
                k += block;
            } while (k < len && g == 1);
            len *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd128(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(u128 n, std::vector<u128>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u128 f = pollard_brent(n);
    split_into(f, out);
    split_into(n / f, out);
}

Factorization from_prime_list(u128 value, std::vector<u128> primes) {
    std::sort(primes.begin(), primes.end());
    Factorization f;
    f.value = value;
    for (u128 p : primes) {
        if (!f.factors.empty() && f.factors.back().prime == p) {
            ++f.factors.back().exponent;
        } else {
            f.factors.push_back({p, 1});
        }
    }
    return f;
}

}  // namespace

u128 Factorization::product() const {
    u128 v = 1;
    for (const auto& pp : factors)
        for (int i = 0; i < pp.exponent; ++i) v *= pp.prime;
    return v;
}

bool is_prime(u128 n) {
    if (n < 2) return false;
    static constexpr std::uint32_t kBases[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    for (std::uint32_t p : kBases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u128 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // The first 12 bases are a proven witness set below 3.18e23 > 2^64.
    const std::size_t nbases = n < kTwo64 ? 12 : std::size(kBases);
    for (std::size_t i = 0; i < nbases; ++i)
        if (!miller_rabin_witness(n, kBases[i], d, r)) return false;
    return true;
}

Factorization factorize(u128 m) {
    if (m == 0) throw std::invalid_argument("factorize: m must be positive");
    if (m > kFactorizeLimit) throw std::invalid_argument("factorize: m exceeds 2^96");
    std::vector<u128> primes;
    u128 rest = m;
    while ((rest & 1) == 0) {
        primes.push_back(2);
        rest >>= 1;
    }
    for (std::uint32_t p : small_primes()) {
        if (p == 2) continue;
        if (p > kTrialLimit) break;
        if (u128(p) * p > rest) break;
        while (rest % p == 0) {
            primes.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) {
        if (rest < u128(kTrialLimit) * kTrialLimit)
            primes.push_back(rest);
        else
            split_into(rest, primes);
    }
    return from_prime_list(m, std::move(primes));
}

Factorization multiply(const Factorization& a, const Factorization& b) {
    Factorization out;
    out.value = a.value * b.value;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && a.factors[i].prime < b.factors[j].prime)) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].prime < a.factors[i].prime) {
            out.factors.push_back(b.factors[j++]);
        } else {
            out.factors.push_back({a.factors[i].prime, a.factors[i].exponent + b.factors[j].exponent});
            ++i;
            ++j;
        }
    }
    return out;
}

std::vector<u128> square_divisors(const Factorization& f) {
    std::vector<u128> out{1};
    for (const auto& [p, e] : f.factors) {
        const std::size_t base = out.size();
        u128 pk = 1;
        for (int k = 1; k <= e / 2; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int jacobi(std::uint64_t a, std::uint64_t n) {
    a %= n;
    int t = 1;
    while (a != 0) {
        const int tz = __builtin_ctzll(a);
        a >>= tz;
        if ((tz & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? t : 0;
}

namespace {

// Jacobi symbol for 128-bit operands, n odd and positive.
int jacobi128(u128 a, u128 n) {
    a %= n;
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const auto r = static_cast<unsigned>(n & 7);
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

u128 mod_positive(i128 a, u128 m) {
    const i128 mm = static_cast<i128>(m);
    i128 r = a % mm;
    if (r < 0) r += mm;
    return static_cast<u128>(r);
}

}  // namespace

int legendre(i128 a, u128 p) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("legendre: p must be an odd prime");
    return jacobi128(mod_positive(a, p), p);
}

int chi_d(i128 d, i128 m) {
    const auto r4 = static_cast<unsigned>(mod_positive(d, 4));
    if (r4 != 0 && r4 != 1) throw std::invalid_argument("chi_d: d must be 0 or 1 mod 4");
    u128 mm = static_cast<u128>(m < 0 ? -m : m);
    if (mm == 0) return 0;
    int sign = 1;
    if ((mm & 1) == 0) {
        if (r4 == 0) return 0;
        int twos = 0;
        while ((mm & 1) == 0) {
            mm >>= 1;
            ++twos;
        }
        if ((twos & 1) && mod_positive(d, 8) == 5) sign = -1;
    }
    if (mm == 1) return sign;
    return sign * jacobi128(mod_positive(d, mm), mm);
}

std::uint64_t isqrt(u128 n) {
    if (n == 0) return 0;
    auto x = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return static_cast<std::uint64_t>(x);
}

bool is_perfect_square(u128 n) {
    const u128 s = isqrt(n);
    return s * s == n;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m >= (std::uint64_t(1) << 32)) return static_cast<std::uint64_t>(pow_mod128(base, exp, m));
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = result * base % m;
        base = base * base % m;
        exp >>= 1;
    }
    return result;
}

std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0 || p == 2) return a;
    // Tonelli-Shanks; p < 2^32 keeps every product inside 64 bits.
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    if (s == 1) return pow_mod(a, (p + 1) / 4, p);
    std::uint64_t z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    std::uint64_t c = pow_mod(z, q, p);
    std::uint64_t x = pow_mod(a, (q + 1) / 2, p);
    std::uint64_t t = pow_mod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        std::uint64_t tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        std::uint64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return x;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

std::span<const std::uint32_t> small_primes() {
    static const std::vector<std::uint32_t> table = primes_up_to((1u << 20) - 1);
    return table;
}

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-v));
    return to_string(static_cast<u128>(v));
}

}  // namespace geodesic::arith
