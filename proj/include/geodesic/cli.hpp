#pragma once

// Command implementations behind the `geodesic` tool, the on-disk class-number
// cache and the verification suites.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodesic/correlation.hpp"
#include "geodesic/spectrum.hpp"

namespace geodesic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kCacheHeader = "# geodesic-cache v1";
inline constexpr const char* kCacheEnv = "GEODESIC_CACHE";

/// Bad flag values; the tool maps it to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed cache file.
class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CacheEntry {
    std::uint64_t d = 0;
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    std::uint64_t h = 0;

    friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

/// Throws CacheError naming the check that fails.
void validate(const CacheEntry& e);

/// Parses a cache file; a missing file yields no entries.
/// Throws CacheError with the line number of the first bad line.
std::vector<CacheEntry> read_cache(const std::filesystem::path& path);

/// Sorts by d, drops duplicates and writes via a temporary file and rename.
void write_cache(const std::filesystem::path& path, std::vector<CacheEntry> entries);

/// Merges the sieve's units into `entries` (existing entries win).
std::vector<CacheEntry> merge(std::vector<CacheEntry> entries, const spectrum::Spectrum& spec);

spectrum::KnownClassNumbers known_class_numbers(const std::vector<CacheEntry>& entries);

/// The explicit flag if given, else $GEODESIC_CACHE if set, else none.
std::optional<std::filesystem::path> resolve_cache_path(const std::optional<std::string>& flag);

/// `n,g,alpha` rows for 2 < n <= max_n.
void write_alpha_csv(std::ostream& out, const spectrum::Spectrum& spec);

/// `r,gamma_predicted,tail_bound` rows for 0 <= r <= r_max.
void write_predict_csv(std::ostream& out, std::uint64_t r_max, std::uint64_t prime_limit, unsigned b_cap);

/// {"meta": {...}, "reports": [...]}
std::string compare_json(const std::vector<correlation::CorrelationReport>& reports, std::uint64_t r_max,
                         std::uint64_t max_n, std::uint64_t prime_limit, unsigned b_cap);

/// Numbers in CSV output: 12 significant digits, `.` separator.
std::string format_number(double x);

/// Sieve up to max_n, reusing and then updating the cache when a path is set.
spectrum::Spectrum sieve_with_cache(std::uint64_t max_n, const std::optional<std::filesystem::path>& cache,
                                    std::ostream& log);

/// Commands; `out_path` "-" means standard output. Each returns an exit code
/// and throws UsageError for invalid parameters.
int cmd_alpha(std::uint64_t max_n, const std::string& out_path, const std::optional<std::filesystem::path>& cache,
              std::ostream& log);
int cmd_predict(std::uint64_t r_max, std::uint64_t prime_limit, unsigned b_cap, const std::string& out_path,
                std::ostream& log);
int cmd_compare(std::uint64_t r_max, std::uint64_t max_n, std::uint64_t prime_limit, unsigned b_cap,
                const std::string& out_path, const std::optional<std::filesystem::path>& cache, std::ostream& log);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

const std::vector<std::string>& suite_names();

/// Runs one suite; throws UsageError for an unknown name.
std::vector<Check> run_suite(const std::string& suite);

/// Prints one PASS/FAIL line per check; exit 0 iff all pass.
int cmd_verify(const std::string& suite, std::ostream& out);

}  // namespace geodesic::cli
