#include "geodesic/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "geodesic/core_arith.hpp"
#include "geodesic/local_factors.hpp"
#include "geodesic/quad_forms.hpp"

#ifndef GEODESIC_VERSION
#define GEODESIC_VERSION "unknown"
#endif

namespace geodesic::cli {

namespace fs = std::filesystem;
using arith::u128;

void validate(const CacheEntry& e) {
    if (!forms::is_discriminant(e.d)) throw CacheError("d = " + std::to_string(e.d) + " is not a discriminant");
    if (e.u == 0 || e.v == 0) throw CacheError("u and v must be positive");
    if (e.h == 0) throw CacheError("h must be positive");
    const u128 uu = u128(e.u) * e.u;
    const u128 vv = u128(e.v) * e.v;
    if (uu < 4 || (uu - 4) % vv != 0 || (uu - 4) / vv != e.d)
        throw CacheError("u^2 - d v^2 != 4 for d = " + std::to_string(e.d));
}

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

CacheEntry parse_line(const std::string& line) {
    CacheEntry e;
    std::uint64_t* fields[] = {&e.d, &e.u, &e.v, &e.h};
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
        const std::size_t comma = line.find(',', start);
        const bool last = i == 3;
        if (last != (comma == std::string::npos)) throw CacheError("expected four comma-separated fields");
        const std::string_view field(line.data() + start, (last ? line.size() : comma) - start);
        if (!parse_u64(field, *fields[i])) throw CacheError("bad integer '" + std::string(field) + "'");
        start = comma + 1;
    }
    validate(e);
    return e;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

template <typename Writer>
void with_output(const std::string& out_path, Writer&& write) {
    if (out_path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    auto out = open_output(out_path);
    write(out);
    out.close();
    if (!out) throw std::runtime_error("write failed for " + out_path);
}

}  // namespace

std::vector<CacheEntry> read_cache(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!fs::exists(path)) return {};
        throw CacheError("cannot read cache " + path.string());
    }
    std::vector<CacheEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != kCacheHeader)
                throw CacheError(path.string() + ":1: missing header '" + std::string(kCacheHeader) + "'");
            continue;
        }
        if (line.empty()) continue;
        try {
            entries.push_back(parse_line(line));
        } catch (const CacheError& err) {
            throw CacheError(path.string() + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
    return entries;
}

void write_cache(const fs::path& path, std::vector<CacheEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const CacheEntry& a, const CacheEntry& b) { return a.d < b.d; });
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const CacheEntry& a, const CacheEntry& b) { return a.d == b.d; }),
                  entries.end());
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CacheError("cannot write " + tmp.string());
        out << kCacheHeader << '\n';
        for (const auto& e : entries) out << e.d << ',' << e.u << ',' << e.v << ',' << e.h << '\n';
        out.close();
        if (!out) throw CacheError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<CacheEntry> merge(std::vector<CacheEntry> entries, const spectrum::Spectrum& spec) {
    spectrum::KnownClassNumbers have = known_class_numbers(entries);
    for (const auto& u : spec.units())
        if (have.emplace(u.d, u.h).second) entries.push_back({u.d, u.u, u.v, u.h});
    return entries;
}

spectrum::KnownClassNumbers known_class_numbers(const std::vector<CacheEntry>& entries) {
    spectrum::KnownClassNumbers known;
    known.reserve(entries.size());
    for (const auto& e : entries) known.emplace(e.d, e.h);
    return known;
}

std::optional<fs::path> resolve_cache_path(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return fs::path(*flag);
    if (const char* env = std::getenv(kCacheEnv); env && *env) return fs::path(env);
    return std::nullopt;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_alpha_csv(std::ostream& out, const spectrum::Spectrum& spec) {
    out << "n,g,alpha\n";
    for (const auto& row : spec.rows()) out << row.n << ',' << row.g << ',' << format_number(row.alpha) << '\n';
}

void write_predict_csv(std::ostream& out, std::uint64_t r_max, std::uint64_t prime_limit, unsigned b_cap) {
    std::vector<local::GammaPrediction> preds(r_max + 1);
    for (std::uint64_t r = 0; r <= r_max; ++r) preds[r] = local::euler_product_gamma(r, prime_limit, b_cap);
    out << "r,gamma_predicted,tail_bound\n";
    for (std::uint64_t r = 0; r <= r_max; ++r)
        out << r << ',' << format_number(preds[r].gamma) << ',' << format_number(preds[r].tail) << '\n';
}

std::string compare_json(const std::vector<correlation::CorrelationReport>& reports, std::uint64_t r_max,
                         std::uint64_t max_n, std::uint64_t prime_limit, unsigned b_cap) {
    nlohmann::json doc;
    doc["meta"] = {{"r_max", r_max},       {"max_n", max_n},
                   {"prime_limit", prime_limit}, {"b_cap", b_cap},
                   {"version", GEODESIC_VERSION}};
    auto& arr = doc["reports"] = nlohmann::json::array();
    for (const auto& rep : reports)
        arr.push_back({{"r", rep.r},
                       {"N", rep.N},
                       {"empirical", rep.empirical},
                       {"predicted", rep.predicted},
                       {"predicted_tail", rep.predicted_tail},
                       {"prime_limit", rep.prime_limit},
                       {"b_cap", rep.b_cap}});
    return doc.dump(2);
}

spectrum::Spectrum sieve_with_cache(std::uint64_t max_n, const std::optional<fs::path>& cache, std::ostream& log) {
    std::vector<CacheEntry> entries;
    if (cache) entries = read_cache(*cache);
    const auto known = known_class_numbers(entries);
    spectrum::SieveOptions options;
    options.known = &known;
    const auto t0 = std::chrono::steady_clock::now();
    auto spec = spectrum::spectrum_sieve(max_n, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << "sieve: " << spec.units().size() << " discriminants, " << spec.reused_class_numbers()
        << " class numbers from cache, " << format_number(secs) << " s\n";
    if (cache && spec.reused_class_numbers() < spec.units().size()) write_cache(*cache, merge(std::move(entries), spec));
    return spec;
}

int cmd_alpha(std::uint64_t max_n, const std::string& out_path, const std::optional<fs::path>& cache,
              std::ostream& log) {
    if (max_n < 3) throw UsageError("--max-n must be at least 3");
    const auto spec = sieve_with_cache(max_n, cache, log);
    with_output(out_path, [&](std::ostream& out) { write_alpha_csv(out, spec); });
    return kExitOk;
}

int cmd_predict(std::uint64_t r_max, std::uint64_t prime_limit, unsigned b_cap, const std::string& out_path,
                std::ostream&) {
    if (prime_limit < 2) throw UsageError("--prime-limit must be at least 2");
    if (b_cap < 1) throw UsageError("--b-cap must be positive");
    with_output(out_path, [&](std::ostream& out) { write_predict_csv(out, r_max, prime_limit, b_cap); });
    return kExitOk;
}

int cmd_compare(std::uint64_t r_max, std::uint64_t max_n, std::uint64_t prime_limit, unsigned b_cap,
                const std::string& out_path, const std::optional<fs::path>& cache, std::ostream& log) {
    if (max_n < 3) throw UsageError("--max-n must be at least 3");
    if (prime_limit < 2) throw UsageError("--prime-limit must be at least 2");
    if (b_cap < 1) throw UsageError("--b-cap must be positive");
    const auto spec = sieve_with_cache(max_n + r_max, cache, log);
    const auto reports = correlation::compare_report(spec, r_max, max_n, prime_limit, b_cap);
    const std::string json = compare_json(reports, r_max, max_n, prime_limit, b_cap);
    with_output(out_path, [&](std::ostream& out) { out << json << '\n'; });
    return kExitOk;
}

}  // namespace geodesic::cli
