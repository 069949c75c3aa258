#include "geodesic/quad_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "geodesic/errors.hpp"

namespace geodesic::forms {

namespace {

using arith::isqrt;

constexpr int kMaxSlotPrimes = 12;

// Factorization of m_b = (d - b^2)/4 for one b, filled in by the sieve.
// Primes above the sieve limit end up in `cof`.
struct Slot {
    std::uint64_t cof;
    std::uint32_t primes[kMaxSlotPrimes];
    std::uint8_t exps[kMaxSlotPrimes];
    std::uint8_t count;
    bool shared;  // some prime divides both b and m_b
};

// Positive-a halves of the reduced forms, grouped by b = b0 + 2k.
struct HalfForms {
    std::uint64_t d = 0;
    std::uint64_t s = 0;   // floor(sqrt d)
    std::uint64_t b0 = 0;  // smallest admissible b
    std::vector<std::uint32_t> seg;  // seg[k]..seg[k+1] index into a
    std::vector<std::uint64_t> a;

    std::size_t size() const { return a.size(); }
    std::uint64_t b_of(std::size_t k) const { return b0 + 2 * k; }

    std::int64_t find(std::int64_t fa, std::uint64_t fb) const {
        if (fb < b0 || fb > s || ((fb - b0) & 1)) return -1;
        const std::size_t k = (fb - b0) / 2;
        const std::uint64_t key = static_cast<std::uint64_t>(fa < 0 ? -fa : fa);
        const auto first = a.begin() + seg[k];
        const auto last = a.begin() + seg[k + 1];
        const auto it = std::lower_bound(first, last, key);
        if (it == last || *it != key) return -1;
        const auto idx = static_cast<std::int64_t>(it - a.begin());
        return fa < 0 ? idx + static_cast<std::int64_t>(a.size()) : idx;
    }
};

void check_discriminant(std::uint64_t d) {
    if (!is_discriminant(d))
        throw std::invalid_argument("not a positive non-square discriminant: " + std::to_string(d));
}

// Divisors of the slot value in [lo, hi], unsorted; hi < 2^32 so no product overflows.
void emit_divisors(const Slot& slot, std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) {
    const std::size_t start = out.size();
    out.push_back(1);
    for (int i = 0; i <= slot.count; ++i) {
        const std::uint64_t p = i < slot.count ? slot.primes[i] : slot.cof;
        const int e = i < slot.count ? slot.exps[i] : (slot.cof > 1 && slot.cof <= hi ? 1 : 0);
        const std::size_t end = out.size();
        for (std::size_t j = start; j < end; ++j) {
            std::uint64_t w = out[j];
            for (int k = 0; k < e; ++k) {
                w *= p;
                if (w > hi) break;
                out.push_back(w);
            }
        }
    }
    std::size_t keep = start;
    for (std::size_t j = start; j < out.size(); ++j)
        if (out[j] >= lo) out[keep++] = out[j];
    out.resize(keep);
}

HalfForms enumerate_half(std::uint64_t d) {
    check_discriminant(d);
    HalfForms hf;
    hf.d = d;
    hf.s = isqrt(d);
    hf.b0 = (d & 1) ? 1 : 2;
    const std::uint64_t s = hf.s;
    const std::size_t K = s >= hf.b0 ? (s - hf.b0) / 2 + 1 : 0;

    const std::uint64_t max_m = (d - hf.b0 * hf.b0) / 4;
    const std::uint64_t plimit = isqrt(max_m);
    const auto primes = arith::small_primes();
    if (plimit >= primes.back())
        throw ResourceError("class_number: discriminant too large for the prime table: " +
                            std::to_string(d));

    thread_local std::vector<Slot> slots;
    slots.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const std::uint64_t b = hf.b_of(k);
        const std::uint64_t m = (d - b * b) / 4;
        Slot& sl = slots[k];
        sl.count = 0;
        sl.shared = (b & 1) == 0 && (m & 1) == 0;
        const int tz = __builtin_ctzll(m);
        sl.cof = m >> tz;
        if (tz > 0) {
            sl.primes[0] = 2;
            sl.exps[0] = static_cast<std::uint8_t>(tz);
            sl.count = 1;
        }
    }

    for (std::uint32_t p : primes) {
        if (p == 2) continue;
        if (p > plimit) break;
        const std::uint64_t dm = d % p;
        std::uint64_t roots[2];
        int nroots = 0;
        if (dm == 0) {
            roots[nroots++] = 0;
        } else {
            if (arith::jacobi(dm, p) != 1) continue;
            const std::uint64_t r = arith::sqrt_mod_prime(dm, p);
            roots[nroots++] = r;
            roots[nroots++] = p - r;
        }
        const std::uint64_t inv2 = (p + 1) / 2;
        const std::uint64_t b0p = hf.b0 % p;
        for (int i = 0; i < nroots; ++i) {
            // b0 + 2k = root (mod p)
            const std::uint64_t k0 = ((roots[i] + p - b0p) % p) * inv2 % p;
            for (std::size_t k = k0; k < K; k += p) {
                Slot& sl = slots[k];
                int e = 0;
                if (sl.cof < (std::uint64_t(1) << 32)) {
                    auto c = static_cast<std::uint32_t>(sl.cof);
                    while (c % p == 0) {
                        c /= p;
                        ++e;
                    }
                    sl.cof = c;
                } else {
                    while (sl.cof % p == 0) {
                        sl.cof /= p;
                        ++e;
                    }
                }
                if (e > 0) {
                    if (dm == 0) sl.shared = true;
                    sl.primes[sl.count] = p;
                    sl.exps[sl.count] = static_cast<std::uint8_t>(e);
                    ++sl.count;
                }
            }
        }
    }

    hf.seg.assign(K + 1, 0);
    std::vector<std::uint64_t> scratch;
    for (std::size_t k = 0; k < K; ++k) {
        const std::uint64_t b = hf.b_of(k);
        const std::uint64_t m = (d - b * b) / 4;
        // sqrt d - b < 2a < sqrt d + b, in integers.
        const std::uint64_t lo = (s + 1 > b) ? std::max<std::uint64_t>(1, (s + 2 - b) / 2) : 1;
        const std::uint64_t hi = (s + b) / 2;
        scratch.clear();
        if (lo <= hi) emit_divisors(slots[k], lo, hi, scratch);
        std::sort(scratch.begin(), scratch.end());
        const Slot& sl = slots[k];
        if (sl.shared || (sl.cof > 1 && b % sl.cof == 0)) {
            for (std::uint64_t av : scratch)
                if (std::gcd(std::gcd(av, b), m / av) == 1) hf.a.push_back(av);
        } else {
            hf.a.insert(hf.a.end(), scratch.begin(), scratch.end());
        }
        hf.seg[k + 1] = static_cast<std::uint32_t>(hf.a.size());
    }
    return hf;
}

QuadForm make_form(std::int64_t a, std::uint64_t b, std::uint64_t d) {
    const auto bb = static_cast<std::int64_t>(b);
    const std::int64_t c = (bb * bb - static_cast<std::int64_t>(d)) / (4 * a);
    return {a, bb, c};
}

}  // namespace

bool is_discriminant(i128 d) {
    if (d <= 0) return false;
    const auto r = static_cast<int>(d % 4);
    if (r != 0 && r != 1) return false;
    return !arith::is_perfect_square(static_cast<u128>(d));
}

std::vector<QuadForm> reduced_forms(std::uint64_t d) {
    const HalfForms hf = enumerate_half(d);
    std::vector<QuadForm> out;
    out.reserve(2 * hf.size());
    for (std::size_t k = 0; k + 1 < hf.seg.size(); ++k) {
        const std::uint64_t b = hf.b_of(k);
        for (std::uint32_t i = hf.seg[k]; i < hf.seg[k + 1]; ++i)
            out.push_back(make_form(static_cast<std::int64_t>(hf.a[i]), b, d));
        for (std::uint32_t i = hf.seg[k]; i < hf.seg[k + 1]; ++i)
            out.push_back(make_form(-static_cast<std::int64_t>(hf.a[i]), b, d));
    }
    return out;
}

QuadForm rho(const QuadForm& f, std::uint64_t d) {
    const auto s = static_cast<std::int64_t>(isqrt(d));
    const std::int64_t t = 2 * (f.c < 0 ? -f.c : f.c);
    if (t == 0) throw std::invalid_argument("rho: c must be nonzero");
    std::int64_t r = (s + f.b) % t;
    if (r < 0) r += t;
    const std::int64_t b2 = s - r;
    const std::int64_t c2 = (b2 * b2 - static_cast<std::int64_t>(d)) / (4 * f.c);
    return {f.c, b2, c2};
}

std::uint64_t class_number(std::uint64_t d) {
    const HalfForms hf = enumerate_half(d);
    const std::size_t F = hf.size();
    std::vector<char> seen(2 * F, 0);
    std::uint64_t cycles = 0;
    const auto sd = static_cast<std::int64_t>(hf.s);
    const auto dd = static_cast<std::int64_t>(d);
    for (std::size_t start = 0; start < 2 * F; ++start) {
        if (seen[start]) continue;
        ++cycles;
        const std::size_t k0 = static_cast<std::size_t>(
            std::upper_bound(hf.seg.begin(), hf.seg.end(), static_cast<std::uint32_t>(start % F)) -
            hf.seg.begin() - 1);
        std::int64_t a = static_cast<std::int64_t>(hf.a[start % F]);
        if (start >= F) a = -a;
        auto b = static_cast<std::int64_t>(hf.b_of(k0));
        std::size_t idx = start;
        while (!seen[idx]) {
            seen[idx] = 1;
            const std::int64_t c = (b * b - dd) / (4 * a);
            const std::int64_t t = 2 * (c < 0 ? -c : c);
            const std::int64_t b2 = sd - (sd + b) % t;
            a = c;
            b = b2;
            const std::int64_t found = hf.find(a, static_cast<std::uint64_t>(b));
            if (found < 0)
                throw std::logic_error("rho left the reduced set for d = " + std::to_string(d));
            idx = static_cast<std::size_t>(found);
        }
        if (idx != start)
            throw std::logic_error("rho is not a permutation for d = " + std::to_string(d));
    }
    return cycles;
}

namespace {

struct CfResult {
    bool exact = false;  // u, v fit in 128 bits
    u128 u = 0;
    u128 v = 0;
    double regulator = 0.0;
};

// Continued fraction of (P0 + sqrt d)/2 with P0 = d mod 2. The convergents
// A_i/B_i give G_i = 2 A_i - P0 B_i with G_i^2 - d B_i^2 = (-1)^(i+1) 2 Q_{i+1};
// the first odd i with Q_{i+1} = 2 yields the fundamental solution of u^2 - d v^2 = 4.
CfResult continued_fraction_unit(std::uint64_t d) {
    check_discriminant(d);
    const auto s = static_cast<i128>(isqrt(d));
    const i128 p0 = d & 1;
    i128 P = p0, Q = 2;
    u128 A2 = 0, A1 = 1, B2 = 1, B1 = 0;
    bool exact = true;
    // Scaled copies for the regulator; true value = scaled * 2^scale.
    double fA2 = 0, fA1 = 1, fB2 = 1, fB1 = 0;
    int scale = 0;
    const u128 kMax = ~u128(0) >> 2;
    for (std::uint64_t i = 0;; ++i) {
        const i128 q = (P + s) / Q;
        if (exact) {
            const u128 uq = static_cast<u128>(q);
            if (A1 != 0 && uq > kMax / A1) exact = false;
            if (exact) {
                const u128 A = uq * A1 + A2;
                const u128 B = uq * B1 + B2;
                if (A > kMax || B > kMax) exact = false;
                A2 = A1;
                A1 = A;
                B2 = B1;
                B1 = B;
            }
        }
        const double fq = static_cast<double>(q);
        const double fA = fq * fA1 + fA2;
        const double fB = fq * fB1 + fB2;
        fA2 = fA1;
        fA1 = fA;
        fB2 = fB1;
        fB1 = fB;
        if (fA1 > 1e200) {
            fA1 = std::ldexp(fA1, -600);
            fA2 = std::ldexp(fA2, -600);
            fB1 = std::ldexp(fB1, -600);
            fB2 = std::ldexp(fB2, -600);
            scale += 600;
        }
        const i128 Pn = q * Q - P;
        const i128 Qn = (static_cast<i128>(d) - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
        if ((i & 1) && Q == 2) {
            CfResult r;
            const double G = 2 * fA1 - static_cast<double>(p0) * fB1;
            r.regulator = scale * std::log(2.0) +
                          std::log((G + fB1 * std::sqrt(static_cast<double>(d))) / 2);
            if (exact) {
                r.exact = true;
                r.u = 2 * A1 - static_cast<u128>(p0) * B1;
                r.v = B1;
                // Small units: recompute the regulator from the exact integers.
                if (r.u < (u128(1) << 52))
                    r.regulator = std::log((static_cast<double>(r.u) +
                                            static_cast<double>(r.v) * std::sqrt(static_cast<double>(d))) /
                                           2);
            }
            return r;
        }
    }
}

// chi_d over one period when d is small enough to tabulate.
std::vector<std::int8_t> chi_table(std::uint64_t d) {
    std::vector<std::int8_t> t(d);
    for (std::uint64_t l = 0; l < d; ++l)
        t[l] = static_cast<std::int8_t>(arith::chi_d_fast(static_cast<std::int64_t>(d), l));
    return t;
}

constexpr std::uint64_t kChiTableLimit = 1u << 22;

double smoothed_sum(std::uint64_t d, double smoothing, const std::vector<std::int8_t>* table) {
    const auto terms = static_cast<std::uint64_t>(std::ceil(40.0 * smoothing));
    const double q = std::exp(-1.0 / smoothing);
    double w = 1.0;
    double sum = 0.0;
    std::uint64_t idx = 0;
    for (std::uint64_t l = 1; l <= terms; ++l) {
        if ((l & 255) == 0)
            w = std::exp(-static_cast<double>(l) / smoothing);
        else
            w *= q;
        if (++idx == d) idx = 0;
        const int chi = table ? (*table)[idx] : arith::chi_d_fast(static_cast<std::int64_t>(d), l);
        if (chi != 0) sum += chi * w / static_cast<double>(l);
    }
    return sum;
}

}  // namespace

PellFundamental pell_fundamental(std::uint64_t d, u128 bound) {
    const CfResult cf = continued_fraction_unit(d);
    if (!cf.exact || cf.u > bound)
        throw ResourceError("pell_fundamental: u exceeds the search bound for d = " + std::to_string(d));
    return {d, cf.u, cf.v, cf.regulator};
}

double regulator(std::uint64_t d) { return continued_fraction_unit(d).regulator; }

double smoothed_L(std::uint64_t d, double smoothing) {
    check_discriminant(d);
    if (!(smoothing >= 1.0)) throw std::invalid_argument("smoothed_L: smoothing must be >= 1");
    if (d <= kChiTableLimit && static_cast<double>(d) < 4.0 * smoothing) {
        const auto table = chi_table(d);
        return smoothed_sum(d, smoothing, &table);
    }
    return smoothed_sum(d, smoothing, nullptr);
}

OracleEstimate class_number_oracle_detail(std::uint64_t d) {
    check_discriminant(d);
    const double reg = regulator(d);
    const double root = std::sqrt(static_cast<double>(d));
    std::vector<std::int8_t> table;
    if (d <= kChiTableLimit) table = chi_table(d);
    const auto* tp = d <= kChiTableLimit ? &table : nullptr;

    double smoothing = 64;
    while (smoothing < static_cast<double>(d) / 4) smoothing *= 2;
    constexpr double kMaxSmoothing = 1 << 22;
    double prev = -1.0;
    for (; smoothing <= kMaxSmoothing; smoothing *= 2) {
        const double est = root * smoothed_sum(d, smoothing, tp) / reg;
        const double rounded = std::round(est);
        if (prev >= 0 && std::round(prev) == rounded && std::abs(est - rounded) < 0.25 && rounded >= 1)
            return {static_cast<std::uint64_t>(rounded), smoothing, est, reg};
        prev = est;
    }
    throw ResourceError("class_number_oracle: no stabilization for d = " + std::to_string(d));
}

}  // namespace geodesic::forms
