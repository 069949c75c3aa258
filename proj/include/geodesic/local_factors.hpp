#pragma once

// The single-prime factors beta_(p) of the truncated L-series sum, their
// Fourier coefficients (closed forms and a brute-force DFT), the local
// factors A_r(p^b) and the Euler product for gamma(r) + 1.

#include <complex>
#include <cstdint>
#include <vector>

namespace geodesic::local {

using Complex = std::complex<double>;

/// 1 if n^2 = 4 (mod p^{2b}) and, for p = 2, (n^2 - 4)/2^{2b} = 0,1 (mod 4).
int indicator_I(std::uint64_t p, unsigned b, std::int64_t n);

/// Finite sum over b <= b_max of p^-b (1 - chi_{(n^2-4)/p^{2b}}(p)/p)^-1 I_{p^b}(n).
/// Throws std::invalid_argument if n <= 2, p is not prime or b_max < ceil(log_p(n + 2)).
double beta_p(std::uint64_t p, std::int64_t n, unsigned b_max);

/// beta_p with the smallest admissible b_max.
double beta_p(std::uint64_t p, std::int64_t n);

/// Smallest b_max accepted by beta_p(p, n, b_max).
unsigned min_b_max(std::uint64_t p, std::int64_t n);

/// The direct sum over d v^2 = n^2 - 4 with all prime factors of v at most P
/// of (1/v) prod_{p <= P} (1 - chi_d(p)/p)^-1.
double beta_P(std::uint64_t P, std::uint64_t n);

struct DftValue {
    Complex value;
    /// Bound on the contribution of the omitted terms b > b_max.
    double tail = 0.0;
};

inline unsigned default_dft_b_max(std::uint64_t p, unsigned c) { return c + (p == 2 ? 10 : 6); }

/// Mean of the b <= b_max part of beta_(p) against e^{-2 pi i a n / p^c}, taken
/// over the full period of every term. Only the residues where a term is
/// nonzero are visited.
/// Throws std::invalid_argument if gcd(a, p) != 1 with c > 0, or b_max < c;
/// ResourceError if a period exceeds 2^62 or more than 10^8 residues are needed.
DftValue fourier_beta_p_dft(std::uint64_t p, std::int64_t a, unsigned c, unsigned b_max);

inline DftValue fourier_beta_p_dft(std::uint64_t p, std::int64_t a, unsigned c) {
    return fourier_beta_p_dft(p, a, c, default_dft_b_max(p, c));
}

/// Closed-form Fourier coefficient of beta_(p) at a/p^c for odd p.
/// Throws std::invalid_argument for p = 2, p not prime, or p | a with c > 0.
Complex fourier_beta_p_closed(std::uint64_t p, std::int64_t a, unsigned c);

/// A_r(p^b) from the closed-form tables; r is reduced mod p^b.
double local_A_closed(std::uint64_t p, unsigned b, std::uint64_t r);

struct OracleA {
    double value = 0.0;
    double imag = 0.0;
    /// Propagated from the DFT tails of the coefficients.
    double tail = 0.0;
};

/// sum over 1 <= a <= p^b, p !| a of |beta_(p)^(a/p^b)|^2 e^{2 pi i a r / p^b}.
/// Throws std::logic_error if the imaginary part exceeds 1e-9.
OracleA local_A_oracle(std::uint64_t p, unsigned b, std::uint64_t r, unsigned b_max);

/// local_A_oracle for every r mod p^b, sharing the coefficients.
std::vector<OracleA> local_A_oracle_all(std::uint64_t p, unsigned b, unsigned b_max);

struct GammaPrediction {
    double gamma = 0.0;
    double tail = 0.0;
};

/// prod_{p <= P} (1 + sum_{b <= cap_p} A_r(p^b)) - 1 with
/// cap_p = max(b_cap, ceil(log_p(r + 4)) + 2), plus a bound on the truncation.
GammaPrediction euler_product_gamma(std::uint64_t r, std::uint64_t prime_limit, unsigned b_cap);

/// 1 + sum_{b <= cap_p} A_r(p^b) for a single prime.
double euler_factor(std::uint64_t p, std::uint64_t r, unsigned b_cap);

/// sum_{n mod p} ((n^2 - 4)/p); equals -1.
int character_sum_check(std::uint64_t p);

struct CaseCounts {
    std::uint64_t plus = 0;   ///< #{n mod p : chi_{n^2-4}(p) = 1}
    std::uint64_t minus = 0;  ///< #{n mod p : chi_{n^2-4}(p) = -1}
    std::uint64_t zero = 0;
};
CaseCounts character_case_counts(std::uint64_t p);

/// sum_{m mod p} e^{2 pi i a m / p} (m/p) - (a/p) eps_p sqrt(p); vanishes.
Complex gauss_sum_check(std::uint64_t p, std::int64_t a);

/// 1 if p = 1 (mod 4), i otherwise.
Complex epsilon_p(std::uint64_t p);

}  // namespace geodesic::local
