#pragma once

// Multiplicities g(n) of primitive hyperbolic classes of trace n, computed from
// the decompositions n^2 - 4 = d v^2 and a first-occurrence sieve that picks
// out the fundamental solutions of u^2 - d v^2 = 4.

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace geodesic::spectrum {

enum class Execution { serial, parallel };

struct DecompositionEntry {
    std::uint64_t d = 0;
    std::uint64_t v = 0;
    bool fundamental = false;
    /// Index into Spectrum::units of the unit for d (set by the sieve).
    std::uint32_t unit = 0;
};

struct TraceDecomposition {
    std::uint64_t n = 0;
    std::vector<DecompositionEntry> entries;
};

struct SpectrumRow {
    std::uint64_t n = 0;
    std::uint64_t g = 0;
    double alpha = 0.0;
    double alpha_tilde = 0.0;
};

/// Fundamental unit found by the sieve: u = tr(eps_d), plus h(d).
struct FundamentalUnit {
    std::uint64_t d = 0;
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    std::uint64_t h = 0;
};

using KnownClassNumbers = std::unordered_map<std::uint64_t, std::uint64_t>;

struct SieveOptions {
    std::size_t memory_budget = std::size_t(2) << 30;
    Execution execution = Execution::parallel;
    /// Class numbers already known (e.g. from the on-disk cache); keyed by d.
    const KnownClassNumbers* known = nullptr;
};

/// Immutable result of spectrum_sieve for 2 < n <= max_n.
class Spectrum {
public:
    std::uint64_t max_n() const { return max_n_; }
    std::span<const SpectrumRow> rows() const { return rows_; }
    const SpectrumRow& row(std::uint64_t n) const;
    std::span<const DecompositionEntry> decomposition(std::uint64_t n) const;
    std::span<const FundamentalUnit> units() const { return units_; }
    /// Number of class numbers taken from SieveOptions::known.
    std::size_t reused_class_numbers() const { return reused_; }

private:
    friend Spectrum spectrum_sieve(std::uint64_t, const SieveOptions&);
    std::uint64_t max_n_ = 0;
    std::vector<SpectrumRow> rows_;
    std::vector<std::uint32_t> offsets_;
    std::vector<DecompositionEntry> entries_;
    std::vector<FundamentalUnit> units_;
    std::size_t reused_ = 0;
};

/// One entry per v with v^2 | n^2 - 4 and (n^2 - 4)/v^2 = 0,1 (mod 4).
/// Fundamental flags are left unset. Throws std::invalid_argument for n <= 2.
TraceDecomposition trace_decompositions(std::uint64_t n);

/// Sequential first-occurrence pass, then a class-number pass (OpenMP when
/// options.execution is parallel), then row assembly.
/// Throws ResourceError when the first-occurrence data would exceed the budget.
Spectrum spectrum_sieve(std::uint64_t max_n, const SieveOptions& options = {});

/// class_number(d) for every d, in input order.
std::vector<std::uint64_t> class_numbers(std::span<const std::uint64_t> ds, Execution execution);

/// sum over all (d, v) with d v^2 = n^2 - 4 of smoothed_L(d, smoothing) / v.
double beta(std::uint64_t n, double smoothing);

/// The same sum with L(1, chi_d) = h(d) log(eps_d) / sqrt(d) taken from the sieve's
/// units; requires n <= spec.max_n().
double beta_from_units(const Spectrum& spec, std::uint64_t n);

}  // namespace geodesic::spectrum
