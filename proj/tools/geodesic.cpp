#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "geodesic/cli.hpp"
#include "geodesic/errors.hpp"

namespace cli = geodesic::cli;

int main(int argc, char** argv) {
    CLI::App app{"Closed geodesics on the modular surface: multiplicities, pair correlations and local factors"};
    app.set_version_flag("--version", GEODESIC_VERSION);
    app.require_subcommand(1);

    std::optional<std::string> cache_flag;
    std::string out_path = "-";

    std::uint64_t max_n = 0;
    auto* alpha = app.add_subcommand("alpha", "Write n,g,alpha for 2 < n <= max-n as CSV");
    alpha->add_option("--max-n", max_n, "Largest trace n")->required();
    alpha->add_option("--out,-o", out_path, "Output file, '-' for stdout");
    alpha->add_option("--cache", cache_flag, "Class-number cache file (default: $GEODESIC_CACHE)");

    std::uint64_t r_max = 0;
    std::uint64_t prime_limit = 10000;
    unsigned b_cap = 8;
    auto* predict = app.add_subcommand("predict", "Write r,gamma_predicted,tail_bound from the Euler product");
    predict->add_option("--r-max", r_max, "Largest shift r")->required();
    predict->add_option("--prime-limit", prime_limit, "Primes p <= P in the product")->capture_default_str();
    predict->add_option("--b-cap", b_cap, "Minimum number of prime-power terms per prime")->capture_default_str();
    predict->add_option("--out,-o", out_path, "Output file, '-' for stdout");

    auto* compare = app.add_subcommand("compare", "Empirical vs predicted pair correlation as JSON");
    compare->add_option("--r-max", r_max, "Largest shift r")->required();
    compare->add_option("--max-n", max_n, "N for the empirical sums")->required();
    compare->add_option("--prime-limit", prime_limit, "Primes p <= P in the product")->capture_default_str();
    compare->add_option("--b-cap", b_cap, "Minimum number of prime-power terms per prime")->capture_default_str();
    compare->add_option("--out,-o", out_path, "Output file, '-' for stdout");
    compare->add_option("--cache", cache_flag, "Class-number cache file (default: $GEODESIC_CACHE)");

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run an oracle suite and print PASS/FAIL per check");
    verify->add_option("suite", suite, "fourier | localfactors | classnumber | lemma41 | gauss")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    try {
        if (*alpha) return cli::cmd_alpha(max_n, out_path, cli::resolve_cache_path(cache_flag), std::cerr);
        if (*predict) return cli::cmd_predict(r_max, prime_limit, b_cap, out_path, std::cerr);
        if (*compare)
            return cli::cmd_compare(r_max, max_n, prime_limit, b_cap, out_path, cli::resolve_cache_path(cache_flag),
                                    std::cerr);
        if (*verify) return cli::cmd_verify(suite, std::cout);
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitCheckFailed;
    }
    return cli::kExitUsage;
}
