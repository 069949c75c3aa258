#pragma once

// Exact integer primitives: factorization, square divisors and the quadratic
// characters chi_d used by every other module.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace geodesic::arith {

using i128 = __int128;
using u128 = unsigned __int128;

/// Largest value accepted by factorize().
inline constexpr u128 kFactorizeLimit = u128(1) << 96;

struct PrimePower {
    u128 prime;
    int exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a positive integer. Primes are strictly increasing.
struct Factorization {
    u128 value = 1;
    std::vector<PrimePower> factors;

    /// Recomputes the value from the factor list.
    u128 product() const;
};

bool is_prime(u128 n);

/// Trial division to 10^6, then Pollard-Brent rho on the cofactor.
/// Throws std::invalid_argument for m == 0 or m > 2^96.
Factorization factorize(u128 m);

/// Factorization of a*b from the factorizations of a and b.
Factorization multiply(const Factorization& a, const Factorization& b);

/// Every v >= 1 with v^2 | f.value, ascending.
std::vector<u128> square_divisors(const Factorization& f);

/// Legendre symbol (a/p). Throws std::invalid_argument unless p is an odd prime.
int legendre(i128 a, u128 p);

/// Jacobi symbol (a/n) for odd n > 0. No validation.
int jacobi(std::uint64_t a, std::uint64_t n);

/// chi_d(m): the completely multiplicative character with chi_d(2) decided by
/// d mod 8, chi_d(p) = (d/p) for odd p, and chi_d(-1) = 1.
/// Throws std::invalid_argument unless d = 0 or 1 (mod 4).
int chi_d(i128 d, i128 m);

/// chi_d for the hot loops: same values as chi_d, no validation, 64-bit only.
inline int chi_d_fast(std::int64_t d, std::uint64_t m) {
    if (m == 0) return 0;
    int sign = 1;
    if ((m & 1) == 0) {
        const int twos = __builtin_ctzll(m);
        const auto r8 = static_cast<unsigned>(((d % 8) + 8) % 8);
        if ((r8 & 3) == 0) return 0;
        if ((twos & 1) && r8 == 5) sign = -1;
        m >>= twos;
    }
    if (m == 1) return sign;
    std::int64_t r = d % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    return sign * jacobi(static_cast<std::uint64_t>(r), m);
}

/// floor(sqrt(n)).
std::uint64_t isqrt(u128 n);

bool is_perfect_square(u128 n);

/// A square root of a modulo the odd prime p (p < 2^32), assuming one exists.
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Primes below 2^20, built once.
std::span<const std::uint32_t> small_primes();

/// Primes <= limit by a plain sieve of Eratosthenes.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

std::string to_string(u128 v);
std::string to_string(i128 v);

}  // namespace geodesic::arith
