#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "geodesic/cli.hpp"
#include "geodesic/core_arith.hpp"
#include "geodesic/local_factors.hpp"
#include "geodesic/quad_forms.hpp"

namespace geodesic::cli {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::uint64_t ipow(std::uint64_t p, unsigned e) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < e; ++i) v *= p;
    return v;
}

std::vector<Check> fourier_suite() {
    std::vector<Check> out;
    for (std::uint64_t p : {3, 5, 7}) {
        for (unsigned c = 0; c <= 4; ++c) {
            const auto pc = static_cast<std::int64_t>(ipow(p, c));
            double worst = 0.0, slack = 0.0;
            for (std::int64_t a = c == 0 ? 0 : 1; a <= (c == 0 ? 0 : pc); ++a) {
                if (c > 0 && a % static_cast<std::int64_t>(p) == 0) continue;
                const auto dft = local::fourier_beta_p_dft(p, a, c);
                const double diff = std::abs(dft.value - local::fourier_beta_p_closed(p, a, c));
                worst = std::max(worst, diff - dft.tail);
                slack = std::max(slack, diff);
            }
            out.push_back({"closed vs dft p=" + std::to_string(p) + " c=" + std::to_string(c), worst <= 1e-9,
                           "max diff " + sci(slack)});
        }
    }
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
        const auto f = local::fourier_beta_p_dft(p, 0, 0);
        const double diff = std::abs(f.value - 1.0);
        out.push_back({"beta_hat(0) = 1 p=" + std::to_string(p), diff <= f.tail + 1e-9, "diff " + sci(diff)});
    }
    return out;
}

std::vector<Check> localfactors_suite() {
    std::vector<Check> out;
    for (std::uint64_t p : {2, 3, 5}) {
        for (unsigned b = 1; ipow(p, b) <= 256; ++b) {
            const auto pb = ipow(p, b);
            const auto oracle = local::local_A_oracle_all(p, b, local::default_dft_b_max(p, b));
            double worst = 0.0;
            bool pass = true;
            for (std::uint64_t r = 0; r < pb; ++r) {
                const double diff = std::abs(oracle[r].value - local::local_A_closed(p, b, r));
                worst = std::max(worst, diff);
                if (diff > 1e-9 + oracle[r].tail) pass = false;
                if (local::local_A_closed(p, b, r) != local::local_A_closed(p, b, r + pb)) pass = false;
                if (r > 0 && std::abs(local::local_A_closed(p, b, r) - local::local_A_closed(p, b, pb - r)) > 1e-15)
                    pass = false;
            }
            out.push_back({"A_r(" + std::to_string(p) + "^" + std::to_string(b) + ") closed vs oracle", pass,
                           "max diff " + sci(worst)});
        }
    }
    return out;
}

std::vector<Check> classnumber_suite() {
    std::vector<Check> out;
    constexpr std::uint64_t kBlock = 1000;
    for (std::uint64_t lo = 1; lo <= 10000; lo += kBlock) {
        std::uint64_t count = 0, mismatched = 0;
        double worst = 0.0;
        for (std::uint64_t d = lo; d < lo + kBlock; ++d) {
            if (!forms::is_discriminant(d)) continue;
            ++count;
            const auto oracle = forms::class_number_oracle_detail(d);
            const auto h = forms::class_number(d);
            if (h != oracle.h) ++mismatched;
            worst = std::max(worst, std::abs(static_cast<double>(h) - oracle.estimate));
        }
        out.push_back({"class_number = oracle, d in [" + std::to_string(lo) + ", " + std::to_string(lo + kBlock - 1) +
                           "]",
                       mismatched == 0 && worst < 0.25,
                       std::to_string(count) + " d, " + std::to_string(mismatched) + " mismatches, max residual " +
                           sci(worst)});
    }
    return out;
}

std::vector<Check> lemma41_suite() {
    std::vector<Check> out;
    for (std::uint64_t P : {2, 3, 5, 7}) {
        const auto primes = arith::primes_up_to(P);
        double worst = 0.0;
        for (std::uint64_t n = 3; n <= 5000; ++n) {
            double prod = 1.0;
            for (std::uint32_t p : primes) prod *= local::beta_p(p, static_cast<std::int64_t>(n));
            worst = std::max(worst, std::abs(prod - local::beta_P(P, n)));
        }
        out.push_back({"beta_P = prod beta_(p), P=" + std::to_string(P) + ", n <= 5000", worst <= 1e-10,
                       "max diff " + sci(worst)});
    }
    return out;
}

std::vector<Check> gauss_suite() {
    std::vector<Check> out;
    bool sums = true, counts = true;
    for (std::uint32_t p : arith::primes_up_to(200)) {
        if (p == 2) continue;
        if (local::character_sum_check(p) != -1) sums = false;
        const auto cc = local::character_case_counts(p);
        if (cc.plus != (p - 3) / 2 || cc.minus != (p - 1) / 2) counts = false;
    }
    out.push_back({"character sum = -1, odd p <= 200", sums, ""});
    out.push_back({"case counts (p-3)/2, (p-1)/2, odd p <= 200", counts, ""});

    const auto primes = arith::primes_up_to(1000);
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t p = primes[1 + rng() % (primes.size() - 1)];
        const auto a = static_cast<std::int64_t>(1 + rng() % (p - 1));
        worst = std::max(worst, std::abs(local::gauss_sum_check(p, a)));
    }
    out.push_back({"gauss sum, 50 pairs", worst <= 1e-10, "max residual " + sci(worst)});
    return out;
}

const std::map<std::string, std::function<std::vector<Check>()>>& suites() {
    static const std::map<std::string, std::function<std::vector<Check>()>> table = {
        {"fourier", fourier_suite},   {"localfactors", localfactors_suite}, {"classnumber", classnumber_suite},
        {"lemma41", lemma41_suite},   {"gauss", gauss_suite},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"fourier", "localfactors", "classnumber", "lemma41", "gauss"};
    return names;
}

std::vector<Check> run_suite(const std::string& suite) {
    const auto it = suites().find(suite);
    if (it == suites().end()) throw UsageError("unknown suite '" + suite + "'");
    return it->second();
}

int cmd_verify(const std::string& suite, std::ostream& out) {
    const auto checks = run_suite(suite);
    bool all = true;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
        all = all && c.pass;
    }
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace geodesic::cli
