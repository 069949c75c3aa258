#include "geodesic/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include "geodesic/core_arith.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/quad_forms.hpp"

namespace geodesic::spectrum {

namespace {

struct SmallFactor {
    std::uint64_t p;
    int e;
};

// Smallest-prime-factor table for 0..limit.
std::vector<std::uint32_t> spf_table(std::uint64_t limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t j = i; j <= limit; j += i)
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
    return spf;
}

void factor_with_spf(std::uint64_t m, const std::vector<std::uint32_t>& spf, std::vector<SmallFactor>& out) {
    while (m > 1) {
        const std::uint64_t p = spf[m];
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.push_back({p, e});
    }
}

// Merges the factorizations of n-2 and n+2 and lists the square divisors of n^2-4.
void square_divisors_of(std::vector<SmallFactor>& factors, std::vector<std::uint64_t>& out) {
    std::sort(factors.begin(), factors.end(), [](const SmallFactor& x, const SmallFactor& y) { return x.p < y.p; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (w > 0 && factors[w - 1].p == factors[i].p)
            factors[w - 1].e += factors[i].e;
        else
            factors[w++] = factors[i];
    }
    factors.resize(w);
    out.assign(1, 1);
    for (const auto& [p, e] : factors) {
        const std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (int k = 1; k <= e / 2; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
}

}  // namespace

const SpectrumRow& Spectrum::row(std::uint64_t n) const {
    if (n < 3 || n > max_n_) throw std::out_of_range("spectrum row out of range: " + std::to_string(n));
    return rows_[n - 3];
}

std::span<const DecompositionEntry> Spectrum::decomposition(std::uint64_t n) const {
    if (n < 3 || n > max_n_) throw std::out_of_range("spectrum row out of range: " + std::to_string(n));
    const std::size_t i = n - 3;
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
}

TraceDecomposition trace_decompositions(std::uint64_t n) {
    if (n <= 2) throw std::invalid_argument("trace_decompositions: n must exceed 2");
    if (n > (std::uint64_t(1) << 31)) throw std::invalid_argument("trace_decompositions: n too large");
    const auto f = arith::multiply(arith::factorize(n - 2), arith::factorize(n + 2));
    const std::uint64_t m = n * n - 4;
    TraceDecomposition out{n, {}};
    for (auto v128 : arith::square_divisors(f)) {
        const auto v = static_cast<std::uint64_t>(v128);
        const std::uint64_t d = m / (v * v);
        if (d % 4 == 0 || d % 4 == 1) out.entries.push_back({d, v, false, 0});
    }
    return out;
}

std::vector<std::uint64_t> class_numbers(std::span<const std::uint64_t> ds, Execution execution) {
    std::vector<std::uint64_t> h(ds.size(), 0);
    const auto count = static_cast<std::int64_t>(ds.size());
    if (execution == Execution::serial) {
        for (std::int64_t i = 0; i < count; ++i) h[i] = forms::class_number(ds[i]);
        return h;
    }
    // Exceptions may not escape an OpenMP region; capture the first one.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            h[i] = forms::class_number(ds[i]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return h;
}

Spectrum spectrum_sieve(std::uint64_t max_n, const SieveOptions& options) {
    if (max_n < 3) throw std::invalid_argument("spectrum_sieve: max_n must be at least 3");
    if (max_n > (std::uint64_t(1) << 31)) throw std::invalid_argument("spectrum_sieve: max_n too large");

    Spectrum spec;
    spec.max_n_ = max_n;
    const auto spf = spf_table(max_n + 2);

    std::unordered_map<std::uint64_t, std::uint32_t> first_seen;
    first_seen.reserve(static_cast<std::size_t>(max_n) * 2);
    spec.offsets_.reserve(max_n - 1);
    spec.offsets_.push_back(0);

    std::vector<SmallFactor> factors;
    std::vector<std::uint64_t> vs;
    constexpr std::size_t kMapNodeBytes = 48;
    for (std::uint64_t n = 3; n <= max_n; ++n) {
        factors.clear();
        factor_with_spf(n - 2, spf, factors);
        factor_with_spf(n + 2, spf, factors);
        square_divisors_of(factors, vs);
        const std::uint64_t m = n * n - 4;
        for (std::uint64_t v : vs) {
            const std::uint64_t d = m / (v * v);
            if (d % 4 != 0 && d % 4 != 1) continue;
            if (arith::is_perfect_square(d))
                throw std::logic_error("square cofactor in n^2-4 = d v^2 at n = " + std::to_string(n));
            const auto next = static_cast<std::uint32_t>(spec.units_.size());
            const auto [it, inserted] = first_seen.try_emplace(d, next);
            if (inserted) spec.units_.push_back({d, n, v, 0});
            if (v == 1 && !inserted)
                throw std::logic_error("d = n^2 - 4 seen before at n = " + std::to_string(n));
            spec.entries_.push_back({d, v, inserted, it->second});
        }
        spec.offsets_.push_back(static_cast<std::uint32_t>(spec.entries_.size()));
        if ((n & 1023) == 0) {
            const std::size_t bytes = spec.entries_.capacity() * sizeof(DecompositionEntry) +
                                      first_seen.size() * kMapNodeBytes +
                                      first_seen.bucket_count() * sizeof(void*) +
                                      spec.units_.capacity() * sizeof(FundamentalUnit);
            if (bytes > options.memory_budget)
                throw ResourceError("spectrum_sieve: first-occurrence data exceeds the memory budget at n = " +
                                    std::to_string(n));
        }
    }

    std::vector<std::uint64_t> todo_d;
    std::vector<std::size_t> todo_index;
    for (std::size_t i = 0; i < spec.units_.size(); ++i) {
        auto& unit = spec.units_[i];
        if (options.known) {
            if (const auto it = options.known->find(unit.d); it != options.known->end()) {
                unit.h = it->second;
                ++spec.reused_;
                continue;
            }
        }
        todo_d.push_back(unit.d);
        todo_index.push_back(i);
    }
    const auto computed = class_numbers(todo_d, options.execution);
    for (std::size_t j = 0; j < computed.size(); ++j) spec.units_[todo_index[j]].h = computed[j];

    spec.rows_.resize(max_n - 2);
    for (std::uint64_t n = 3; n <= max_n; ++n) {
        SpectrumRow& row = spec.rows_[n - 3];
        row.n = n;
        for (std::uint32_t k = spec.offsets_[n - 3]; k < spec.offsets_[n - 2]; ++k) {
            const auto& e = spec.entries_[k];
            if (e.fundamental) row.g += spec.units_[e.unit].h;
        }
        if (row.g < 1) throw std::logic_error("g(n) = 0 at n = " + std::to_string(n));
        row.alpha = static_cast<double>(row.g) * std::log(static_cast<double>(n)) / static_cast<double>(n);
        row.alpha_tilde = row.alpha - 1.0;
    }
    return spec;
}

double beta(std::uint64_t n, double smoothing) {
    double sum = 0.0;
    for (const auto& e : trace_decompositions(n).entries)
        sum += forms::smoothed_L(e.d, smoothing) / static_cast<double>(e.v);
    return sum;
}

double beta_from_units(const Spectrum& spec, std::uint64_t n) {
    double sum = 0.0;
    for (const auto& e : spec.decomposition(n)) {
        const auto& unit = spec.units()[e.unit];
        const double root = std::sqrt(static_cast<double>(unit.d));
        const double reg = std::log((static_cast<double>(unit.u) + static_cast<double>(unit.v) * root) / 2);
        sum += static_cast<double>(unit.h) * reg / root / static_cast<double>(e.v);
    }
    return sum;
}

}  // namespace geodesic::spectrum
