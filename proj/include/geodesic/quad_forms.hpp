#pragma once

// Indefinite binary quadratic forms of positive non-square discriminant:
// reduced forms, class numbers by cycle counting, the Pell unit and the
// smoothed L(1, chi_d) series used as an independent class-number oracle.

#include <cstdint>
#include <vector>

#include "geodesic/core_arith.hpp"

namespace geodesic::forms {

using arith::i128;
using arith::u128;

/// a x^2 + b xy + c y^2
struct QuadForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

/// Minimal positive solution of u^2 - d v^2 = 4; regulator = log((u + v sqrt d) / 2).
struct PellFundamental {
    std::uint64_t d = 0;
    u128 u = 0;
    u128 v = 0;
    double regulator = 0.0;
};

inline constexpr u128 kDefaultPellBound = 10'000'000;

/// d > 0, d = 0,1 (mod 4), d not a perfect square.
bool is_discriminant(i128 d);

/// All primitive reduced forms: 0 < b < sqrt d and sqrt d - b < 2|a| < sqrt d + b.
/// Ordered by b, then positive a ascending, then the mirrored negative forms.
std::vector<QuadForm> reduced_forms(std::uint64_t d);

/// The reduction operator rho(a,b,c) = (c, b', (b'^2 - d)/(4c)) with
/// b' = -b (mod 2c) picked so the image of a reduced form is reduced.
QuadForm rho(const QuadForm& f, std::uint64_t d);

/// Narrow class number: the number of rho-cycles on the reduced forms.
/// Throws std::invalid_argument for invalid d and ResourceError above ~4.4e12.
std::uint64_t class_number(std::uint64_t d);

/// Minimal (u, v) by the continued-fraction expansion of (P0 + sqrt d)/2.
/// Throws ResourceError if u exceeds `bound`.
PellFundamental pell_fundamental(std::uint64_t d, u128 bound = kDefaultPellBound);

/// log eps_d for any discriminant, without forming u and v explicitly.
double regulator(std::uint64_t d);

/// sum_{l >= 1} chi_d(l)/l * exp(-l/N), truncated at l <= 40 N.
double smoothed_L(std::uint64_t d, double smoothing);

struct OracleEstimate {
    std::uint64_t h = 0;
    double smoothing = 0.0;  ///< the stabilized N*
    double estimate = 0.0;   ///< sqrt(d) * smoothed_L / regulator before rounding
    double regulator = 0.0;
};

/// Class number from h log eps_d = sqrt(d) L(1, chi_d), doubling the smoothing
/// until two successive estimates agree and sit within 0.25 of an integer.
/// Throws ResourceError if no stabilization happens by N = 2^22.
OracleEstimate class_number_oracle_detail(std::uint64_t d);

inline std::uint64_t class_number_oracle(std::uint64_t d) {
    return class_number_oracle_detail(d).h;
}

}  // namespace geodesic::forms
