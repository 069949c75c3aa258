#include "geodesic/local_factors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>

#include "geodesic/core_arith.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/spectrum.hpp"

namespace geodesic::local {

namespace {

using arith::i128;
using arith::u128;

constexpr u128 kPeriodLimit = u128(1) << 62;
constexpr u128 kModulusLimit = u128(1) << 126;
constexpr std::uint64_t kResidueLimit = 100'000'000;
constexpr double kTwoPi = 2 * std::numbers::pi;

void require_prime(std::uint64_t p, const char* what) {
    if (!arith::is_prime(p)) throw std::invalid_argument(std::string(what) + ": p must be prime");
}

void require_odd_prime(std::uint64_t p, const char* what) {
    if (p == 2 || !arith::is_prime(p)) throw std::invalid_argument(std::string(what) + ": p must be an odd prime");
}

// p^e, or 0 once the power reaches `limit`.
u128 power_below(std::uint64_t p, unsigned e, u128 limit) {
    u128 v = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (v >= limit / p) return 0;
        v *= p;
    }
    return v;
}

i128 mod_floor(i128 a, i128 m) {
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

// chi_D(p) for the discriminant D: the Legendre symbol for odd p, the value
// fixed by D mod 8 for p = 2.
int chi_at_p(i128 D, std::uint64_t p) {
    if (p == 2) {
        const auto r = static_cast<int>(mod_floor(D, 8));
        if (r % 2 == 0) return 0;
        return r == 1 ? 1 : -1;
    }
    const auto r = static_cast<std::uint64_t>(mod_floor(D, static_cast<i128>(p)));
    return arith::jacobi(r, p);
}

// Legendre symbol table (x/p) for x = 0..p-1.
std::vector<std::int8_t> legendre_table(std::uint64_t p) {
    std::vector<std::int8_t> t(p, -1);
    t[0] = 0;
    for (std::uint64_t k = 1; k <= p / 2; ++k) t[k * k % p] = 1;
    return t;
}

// Residues n mod p^k with n^2 = 4 (mod p^k).
std::vector<u128> roots_of_four(std::uint64_t p, unsigned k) {
    if (k == 0) return {0};
    const u128 q = power_below(p, k, kPeriodLimit);
    if (p != 2) return {2 % q, q - 2 % q};
    std::vector<u128> roots{0};
    u128 mod = 2;
    for (unsigned j = 1; j < k; ++j) {
        const u128 next = mod * 2;
        std::vector<u128> lifted;
        for (u128 x : roots)
            for (u128 y : {x, x + mod})
                if (static_cast<u128>(mod_floor(static_cast<i128>(y * y) - 4, static_cast<i128>(next))) == 0)
                    lifted.push_back(y);
        roots = std::move(lifted);
        mod = next;
    }
    return roots;
}

bool congruent(std::uint64_t r, i128 x, u128 m) {
    return mod_floor(static_cast<i128>(r) - x, static_cast<i128>(m)) == 0;
}

double pow_real(std::uint64_t p, double e) { return std::pow(static_cast<double>(p), e); }

unsigned ceil_log(std::uint64_t p, std::uint64_t x) {
    unsigned e = 0;
    u128 v = 1;
    while (v < x) {
        v *= p;
        ++e;
    }
    return e;
}

double A_two(unsigned b, std::uint64_t r) {
    switch (b) {
        case 1:
            return (r % 2 == 0 ? 1.0 : -1.0) / 9;
        case 2:
            if (r % 2 == 1) return 0.0;
            return (r % 4 == 0 ? 1.0 : -1.0) / 18;
        case 3:
        case 5:
            return 0.0;
        case 4:
            if (r % 8 != 0) return 0.0;
            return (r % 16 == 0 ? 1.0 : -1.0) / 144;
        default:
            break;
    }
    const u128 m = power_below(2, b, kModulusLimit);
    const i128 half = static_cast<i128>(m / 2);
    const i128 x = 4 + static_cast<i128>(m / 4);
    double k = 0.0;
    if (congruent(r, 0, m))
        k = 2;
    else if (congruent(r, half, m))
        k = -2;
    else if (congruent(r, x, m) || congruent(r, -x, m))
        k = 1;
    else if (congruent(r, x + half, m) || congruent(r, -(x + half), m))
        k = -1;
    return k / (9 * std::ldexp(1.0, 2 * static_cast<int>(b) - 4));
}

double A_odd_first(std::uint64_t p, std::uint64_t r, const std::vector<std::int8_t>& leg) {
    r %= p;
    std::int64_t s = 0;
    for (std::uint64_t n = 0; n < p; ++n) {
        const std::uint64_t m = n + r < p ? n + r : n + r - p;
        s += leg[(n * n + p * 4 - 4) % p] * leg[(m * m + p * 4 - 4) % p];
    }
    const double q = static_cast<double>(p) * p - 1;
    return (static_cast<double>(p) * static_cast<double>(s) - 1) / (q * q);
}

double A_odd_higher(std::uint64_t p, unsigned b, std::uint64_t r) {
    const u128 m = power_below(p, b, kModulusLimit);
    const u128 m1 = m / p;
    const int sign = (b % 2 == 0 || p % 4 == 1) ? 1 : -1;  // ((-1)/p)^b
    const double pb = pow_real(p, b);
    const double pb1 = pb / static_cast<double>(p);
    double k = 0.0;
    if (congruent(r, 0, m))
        k = 2 * pb * (1 - 1.0 / static_cast<double>(p));
    else if (congruent(r, 0, m1))
        k = -2 * pb1;
    else if (congruent(r, 4, m) || congruent(r, -4, m))
        k = sign * pb * (1 - 1.0 / static_cast<double>(p));
    else if (congruent(r, 4, m1) || congruent(r, -4, m1))
        k = -sign * pb1;
    const double q = static_cast<double>(p) * p - 1;
    return k / (q * q * pow_real(p, 3.0 * b - 4));
}

}  // namespace

int indicator_I(std::uint64_t p, unsigned b, std::int64_t n) {
    const i128 m = static_cast<i128>(n) * n - 4;
    if (b == 0) return 1;
    if (m == 0) return 1;
    const u128 q = power_below(p, 2 * b, kModulusLimit);
    const u128 am = static_cast<u128>(m < 0 ? -m : m);
    if (q == 0 || q > am) return 0;
    if (mod_floor(m, static_cast<i128>(q)) != 0) return 0;
    if (p == 2) {
        const i128 r = mod_floor(m / static_cast<i128>(q), 4);
        return r == 0 || r == 1;
    }
    return 1;
}

unsigned min_b_max(std::uint64_t p, std::int64_t n) {
    if (n <= 2) throw std::invalid_argument("beta_p: n must exceed 2");
    return ceil_log(p, static_cast<std::uint64_t>(n) + 2);
}

double beta_p(std::uint64_t p, std::int64_t n, unsigned b_max) {
    require_prime(p, "beta_p");
    if (b_max < min_b_max(p, n))
        throw std::invalid_argument("beta_p: b_max too small for n = " + std::to_string(n));
    const i128 m = static_cast<i128>(n) * n - 4;
    double sum = 0.0;
    i128 q = 1;
    double weight = 1.0;
    for (unsigned b = 0; b <= b_max; ++b) {
        if (q > m) break;
        if (indicator_I(p, b, n)) {
            const int chi = chi_at_p(m / q, p);
            sum += weight / (1 - chi / static_cast<double>(p));
        }
        q *= static_cast<i128>(p) * p;
        weight /= static_cast<double>(p);
    }
    return sum;
}

double beta_p(std::uint64_t p, std::int64_t n) { return beta_p(p, n, min_b_max(p, n)); }

double beta_P(std::uint64_t P, std::uint64_t n) {
    if (P < 2) throw std::invalid_argument("beta_P: P must be at least 2");
    const auto primes = arith::primes_up_to(P);
    double sum = 0.0;
    for (const auto& e : spectrum::trace_decompositions(n).entries) {
        std::uint64_t rest = e.v;
        for (std::uint32_t p : primes)
            while (rest % p == 0) rest /= p;
        if (rest != 1) continue;
        double prod = 1.0;
        for (std::uint32_t p : primes) {
            const int chi = chi_at_p(static_cast<i128>(e.d), p);
            prod /= 1 - chi / static_cast<double>(p);
        }
        sum += prod / static_cast<double>(e.v);
    }
    return sum;
}

DftValue fourier_beta_p_dft(std::uint64_t p, std::int64_t a, unsigned c, unsigned b_max) {
    require_prime(p, "fourier_beta_p_dft");
    if (c > 0 && a % static_cast<std::int64_t>(p) == 0)
        throw std::invalid_argument("fourier_beta_p_dft: a must be coprime to p");
    if (b_max < c) throw std::invalid_argument("fourier_beta_p_dft: b_max must be at least c");
    const u128 pc = power_below(p, c, kPeriodLimit);
    if (pc == 0) throw ResourceError("fourier_beta_p_dft: p^c exceeds 2^62");

    Complex total = 0.0;
    std::uint64_t visited = 0;
    double weight = 1.0;
    for (unsigned b = 0; b <= b_max; ++b, weight /= static_cast<double>(p)) {
        const unsigned span = std::max(p == 2 ? 2 * b + 3 : 2 * b + 1, c);
        const u128 period = power_below(p, span, kPeriodLimit);
        if (period == 0) throw ResourceError("fourier_beta_p_dft: period exceeds 2^62");
        const u128 q = power_below(p, 2 * b, kPeriodLimit);
        const auto roots = roots_of_four(p, 2 * b);
        const u128 steps = period / q;
        visited += static_cast<std::uint64_t>(steps) * roots.size();
        if (visited > kResidueLimit) throw ResourceError("fourier_beta_p_dft: more than 10^8 residues");
        Complex sum = 0.0;
        for (u128 root : roots) {
            for (u128 j = 0; j < steps; ++j) {
                auto n = static_cast<i128>(root + j * q);
                if (n <= 2) n += static_cast<i128>(period);
                const i128 D = (n * n - 4) / static_cast<i128>(q);
                if (p == 2 && mod_floor(D, 4) > 1) continue;
                const double value = 1 / (1 - chi_at_p(D, p) / static_cast<double>(p));
                if (c == 0) {
                    sum += value;
                } else {
                    const i128 t = mod_floor(static_cast<i128>(a) * (n % static_cast<i128>(pc)), static_cast<i128>(pc));
                    const double angle = -kTwoPi * static_cast<double>(t) / static_cast<double>(pc);
                    sum += value * Complex(std::cos(angle), std::sin(angle));
                }
            }
        }
        total += sum / static_cast<double>(period) * weight;
    }
    // A term b has mean absolute value at most p^-b p/(p-1) rho with rho <= k_p p^-2b.
    const double pd = static_cast<double>(p);
    const double kp = p == 2 ? 8.0 : 2.0;
    const double tail = pd / (pd - 1) * kp * std::pow(pd, -3.0 * (b_max + 1)) / (1 - std::pow(pd, -3.0));
    return {total, tail};
}

Complex epsilon_p(std::uint64_t p) { return p % 4 == 1 ? Complex(1, 0) : Complex(0, 1); }

Complex fourier_beta_p_closed(std::uint64_t p, std::int64_t a, unsigned c) {
    require_odd_prime(p, "fourier_beta_p_closed");
    if (c == 0) return 1.0;
    const auto ip = static_cast<std::int64_t>(p);
    if (a % ip == 0) throw std::invalid_argument("fourier_beta_p_closed: a must be coprime to p");
    const double pd = static_cast<double>(p);
    const double q = pd * pd - 1;
    if (c == 1) {
        // The summand is even in n, so the sign of the exponent is immaterial.
        const auto leg = legendre_table(p);
        const std::uint64_t ar = static_cast<std::uint64_t>(((a % ip) + ip) % ip);
        Complex sum = 0.0;
        for (std::uint64_t n = 0; n < p; ++n) {
            const int chi = leg[(n * n + 4 * p - 4) % p];
            if (chi == 0) continue;
            const double angle = -kTwoPi * static_cast<double>(ar * n % p) / pd;
            sum += static_cast<double>(chi) * Complex(std::cos(angle), std::sin(angle));
        }
        return sum / q;
    }
    const u128 pc = power_below(p, c, kPeriodLimit);
    if (pc == 0) throw std::invalid_argument("fourier_beta_p_closed: p^c exceeds 2^62");
    const auto ar = static_cast<double>(mod_floor(a, static_cast<i128>(pc)));
    const double angle = 2 * kTwoPi * ar / static_cast<double>(pc);
    const double scale = 1 / (q * pow_real(p, 1.5 * c - 2));
    if (c % 2 == 0) return 2 * std::cos(angle) * scale;
    const int la = arith::legendre(a, p);
    const int lma = arith::legendre(-static_cast<i128>(a), p);
    const Complex s = static_cast<double>(la) * std::polar(1.0, angle) + static_cast<double>(lma) * std::polar(1.0, -angle);
    return epsilon_p(p) * s * scale;
}

double local_A_closed(std::uint64_t p, unsigned b, std::uint64_t r) {
    require_prime(p, "local_A_closed");
    if (b == 0) throw std::invalid_argument("local_A_closed: b must be positive");
    if (power_below(p, b, kModulusLimit) == 0) throw std::invalid_argument("local_A_closed: p^b exceeds 2^126");
    if (p == 2) return A_two(b, r);
    if (b == 1) return A_odd_first(p, r, legendre_table(p));
    return A_odd_higher(p, b, r);
}

std::vector<OracleA> local_A_oracle_all(std::uint64_t p, unsigned b, unsigned b_max) {
    require_prime(p, "local_A_oracle");
    if (b == 0) throw std::invalid_argument("local_A_oracle: b must be positive");
    if (b_max < b) throw std::invalid_argument("local_A_oracle: b_max must be at least b");
    const u128 m128 = power_below(p, b, u128(1) << 24);
    if (m128 == 0) throw ResourceError("local_A_oracle: p^b exceeds 2^24");
    const auto m = static_cast<std::int64_t>(m128);

    std::vector<double> mag2(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<double> err(static_cast<std::size_t>(m) + 1, 0.0);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t a = 1; a <= m; ++a) {
        if (a % static_cast<std::int64_t>(p) == 0) continue;
        try {
            const auto f = fourier_beta_p_dft(p, a, b, b_max);
            mag2[a] = std::norm(f.value);
            err[a] = 2 * std::abs(f.value) * f.tail + f.tail * f.tail;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    double tail = 0.0;
    for (double e : err) tail += e;
    std::vector<OracleA> out(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < m; ++r) {
        Complex sum = 0.0;
        for (std::int64_t a = 1; a <= m; ++a) {
            if (mag2[a] == 0.0) continue;
            const double angle = kTwoPi * static_cast<double>((a * r) % m) / static_cast<double>(m);
            sum += mag2[a] * Complex(std::cos(angle), std::sin(angle));
        }
        if (std::abs(sum.imag()) > 1e-9)
            throw std::logic_error("local_A_oracle: imaginary part " + std::to_string(sum.imag()));
        out[r] = {sum.real(), sum.imag(), tail};
    }
    return out;
}

OracleA local_A_oracle(std::uint64_t p, unsigned b, std::uint64_t r, unsigned b_max) {
    const auto all = local_A_oracle_all(p, b, b_max);
    return all[r % all.size()];
}

namespace {

struct FactorTerm {
    double factor = 1.0;
    double b_tail = 0.0;
};

FactorTerm factor_with_tail(std::uint64_t p, std::uint64_t r, unsigned b_cap) {
    const unsigned cap = std::max(b_cap, ceil_log(p, r + 4) + 2);
    FactorTerm out;
    unsigned last = 0;
    for (unsigned b = 1; b <= cap; ++b) {
        if (power_below(p, b, kPeriodLimit) == 0) break;
        if (p != 2 && b == 1)
            out.factor += A_odd_first(p, r, legendre_table(p));
        else
            out.factor += p == 2 ? A_two(b, r) : A_odd_higher(p, b, r);
        last = b;
    }
    // |A_r(p^b)| <= 4 / ((p^2 - 1)^2 p^(2b - 4)), summed over b > last.
    const double pd = static_cast<double>(p);
    const double q = pd * pd - 1;
    out.b_tail = 4 / (q * q) * std::pow(pd, 4.0 - 2.0 * (last + 1)) / (1 - 1 / (pd * pd));
    return out;
}

// Bound on sum over primes p > P of |sum_b A_r(p^b)|, using
// f(m) = (m^2 + 1)/(m^2 - 1)^2 + 2 m^2/(m^2 - 1)^3 over odd m > P.
double prime_tail(std::uint64_t P) {
    const std::uint64_t upper = 64 * std::max<std::uint64_t>(P, 64);
    double sum = 0.0;
    for (std::uint64_t m = P + 1 + (P % 2); m <= upper; m += 2) {
        const double x = static_cast<double>(m) * static_cast<double>(m);
        sum += (x + 1) / ((x - 1) * (x - 1)) + 2 * x / ((x - 1) * (x - 1) * (x - 1));
    }
    // f(m) <= 1.1/m^2 beyond 10 and is decreasing.
    return sum + 0.55 / static_cast<double>(upper - 2);
}

}  // namespace

double euler_factor(std::uint64_t p, std::uint64_t r, unsigned b_cap) {
    require_prime(p, "euler_factor");
    if (b_cap < 1) throw std::invalid_argument("euler_factor: b_cap must be positive");
    return factor_with_tail(p, r, b_cap).factor;
}

GammaPrediction euler_product_gamma(std::uint64_t r, std::uint64_t prime_limit, unsigned b_cap) {
    if (prime_limit < 2) throw std::invalid_argument("euler_product_gamma: prime_limit must be at least 2");
    if (b_cap < 1) throw std::invalid_argument("euler_product_gamma: b_cap must be positive");
    const auto primes = arith::primes_up_to(prime_limit);
    std::vector<FactorTerm> terms(primes.size());
    const auto count = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) terms[i] = factor_with_tail(primes[i], r, b_cap);

    double product = 1.0;
    double relative = 0.0;
    for (const auto& t : terms) {
        product *= t.factor;
        relative += t.b_tail / std::abs(t.factor);
    }
    relative += 2 * prime_tail(prime_limit);
    return {product - 1, std::abs(product) * std::expm1(relative)};
}

int character_sum_check(std::uint64_t p) {
    require_odd_prime(p, "character_sum_check");
    const auto leg = legendre_table(p);
    int sum = 0;
    for (std::uint64_t n = 0; n < p; ++n) sum += leg[(n * n + 4 * p - 4) % p];
    return sum;
}

CaseCounts character_case_counts(std::uint64_t p) {
    require_odd_prime(p, "character_case_counts");
    const auto leg = legendre_table(p);
    CaseCounts out;
    for (std::uint64_t n = 0; n < p; ++n) {
        const int v = leg[(n * n + 4 * p - 4) % p];
        if (v > 0)
            ++out.plus;
        else if (v < 0)
            ++out.minus;
        else
            ++out.zero;
    }
    return out;
}

Complex gauss_sum_check(std::uint64_t p, std::int64_t a) {
    require_odd_prime(p, "gauss_sum_check");
    const auto ip = static_cast<std::int64_t>(p);
    if (a % ip == 0) throw std::invalid_argument("gauss_sum_check: a must be coprime to p");
    const auto leg = legendre_table(p);
    const auto ar = static_cast<std::uint64_t>(((a % ip) + ip) % ip);
    Complex sum = 0.0;
    for (std::uint64_t m = 1; m < p; ++m) {
        const double angle = kTwoPi * static_cast<double>(ar * m % p) / static_cast<double>(p);
        sum += static_cast<double>(leg[m]) * Complex(std::cos(angle), std::sin(angle));
    }
    return sum - static_cast<double>(leg[ar]) * epsilon_p(p) * std::sqrt(static_cast<double>(p));
}

}  // namespace geodesic::local
