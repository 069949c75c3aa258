#pragma once

// Finite-N pair correlations, mean and Fourier coefficients of alpha(n), and
// their comparison with the Euler-product prediction.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "geodesic/spectrum.hpp"

namespace geodesic::correlation {

using Complex = std::complex<double>;

/// rows[i] must describe n = i + 3, as produced by Spectrum::rows().
/// All functions below throw std::invalid_argument when the rows do not reach
/// the largest n they need, or when N < 3.

/// (1/N) sum_{2 < n <= N} alpha~(n) alpha~(n + r)
double empirical_gamma(std::span<const spectrum::SpectrumRow> rows, std::uint64_t r, std::uint64_t N);

/// (1/N) sum_{2 < n <= N} alpha(n)
double empirical_mean(std::span<const spectrum::SpectrumRow> rows, std::uint64_t N);

/// (1/N) sum_{2 < n <= N} alpha(n) e^{-2 pi i a n / b}; requires gcd(a, b) = 1.
Complex empirical_fourier(std::span<const spectrum::SpectrumRow> rows, std::uint64_t N, std::int64_t a,
                          std::uint64_t b);

struct CorrelationReport {
    std::uint64_t r = 0;
    std::uint64_t N = 0;
    double empirical = 0.0;
    double predicted = 0.0;
    double predicted_tail = 0.0;
    std::uint64_t prime_limit = 0;
    unsigned b_cap = 0;
};

/// One report per r in [0, r_max] from an existing spectrum covering N + r_max.
std::vector<CorrelationReport> compare_report(const spectrum::Spectrum& spec, std::uint64_t r_max, std::uint64_t N,
                                              std::uint64_t prime_limit, unsigned b_cap);

/// As above, sieving spectrum_sieve(N + r_max, options) first.
std::vector<CorrelationReport> compare_report(std::uint64_t r_max, std::uint64_t N, std::uint64_t prime_limit,
                                              unsigned b_cap, const spectrum::SieveOptions& options = {});

/// One factor of a multiplicative frequency: a_p / p^c.
struct LocalFrequency {
    std::uint64_t p = 0;
    unsigned c = 0;
    std::int64_t a = 0;
};

/// Splits a/b into local parts with sum a_p / p^{ord_p b} = a/b (mod 1).
std::vector<LocalFrequency> split_frequency(std::int64_t a, std::uint64_t b);

/// true if the parts are coprime numerators over distinct primes and sum to a/b mod 1.
bool splits(std::span<const LocalFrequency> parts, std::int64_t a, std::uint64_t b);

/// prod over the parts of beta_(p)^(a_p / p^c): closed forms for odd p, the DFT for p = 2.
Complex predicted_fourier(std::span<const LocalFrequency> parts);

inline Complex predicted_fourier(std::int64_t a, std::uint64_t b) {
    const auto parts = split_frequency(a, b);
    return predicted_fourier(parts);
}

}  // namespace geodesic::correlation
