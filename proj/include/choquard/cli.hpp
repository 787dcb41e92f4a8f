// Command-line front end.
//
//   choquard suite       run every check
//   choquard identities  closed-form and integral-identity checks
//   choquard funk-hecke  Funk-Hecke oracle checks
//   choquard spectrum    multiplier and kernel-certificate checks
//   choquard csv         emit a curve as CSV
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 invalid
// configuration or arguments.
#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "choquard/verify.hpp"

namespace choquard::cli {

namespace detail {

inline std::vector<double> parse_alpha_list(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const std::size_t comma = item.find(',', start);
            const std::string tok = item.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!tok.empty()) out.push_back(std::stod(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

inline std::map<std::string, double> parse_tol_list(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const std::size_t comma = item.find(',', start);
            const std::string tok = item.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!tok.empty()) {
                const std::size_t eq = tok.find('=');
                if (eq == std::string::npos)
                    throw verify::ConfigError("--tol expects name=value pairs, got " + tok);
                out[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

inline void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw verify::ConfigError("cannot open output path " + path);
    f << text;
    if (!f) throw verify::ConfigError("write failed for " + path);
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"numerical verification toolkit for the planar nonlocal bubble "
                 "nondegeneracy certificate"};
    app.require_subcommand(1);
    app.fallthrough();

    std::vector<std::string> alpha_items, tol_items;
    int max_degree = 8;
    int quad_level = 24;
    std::uint64_t seed = 20260810;
    std::string out_path, curve_name;

    app.add_option("--alpha", alpha_items, "comma list of alpha values in (0,2)");
    app.add_option("--max-degree", max_degree, "highest harmonic degree K");
    app.add_option("--quad-level", quad_level, "sphere/plane quadrature level");
    app.add_option("--tol", tol_items, "comma list of name=value tolerance overrides");
    app.add_option("--seed", seed, "seed for the deterministic sample points");
    app.add_option("--out", out_path, "output path (default: stdout)");

    auto* suite = app.add_subcommand("suite", "run the full verification suite");
    auto* spectrum = app.add_subcommand("spectrum", "multiplier and kernel checks");
    auto* identities = app.add_subcommand("identities", "closed-form identity checks");
    auto* funk_hecke = app.add_subcommand("funk-hecke", "Funk-Hecke oracle checks");
    auto* csv = app.add_subcommand("csv", "emit a curve as CSV");
    csv->add_option("--csv", curve_name,
                    "curve id: lambda_vs_alpha | mu_vs_k | kernel_gap")
        ->required();

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        verify::SuiteConfig cfg;
        if (!alpha_items.empty()) cfg.alphas = detail::parse_alpha_list(alpha_items);
        cfg.max_degree = max_degree;
        cfg.quad_level = quad_level;
        cfg.tol_overrides = detail::parse_tol_list(tol_items);
        cfg.rng_seed = seed;
        cfg.output_path = out_path;
        cfg.validate();

        if (csv->parsed()) {
            verify::Curve curve;
            if (curve_name == "lambda_vs_alpha")
                curve = verify::Curve::lambda_vs_alpha;
            else if (curve_name == "mu_vs_k")
                curve = verify::Curve::mu_vs_k;
            else if (curve_name == "kernel_gap")
                curve = verify::Curve::kernel_gap;
            else
                throw verify::ConfigError("unknown curve id " + curve_name);
            detail::write_output(verify::csv_curve(curve, cfg), out_path);
            return 0;
        }

        std::set<verify::Section> sections;
        if (suite->parsed()) {
            sections = verify::all_sections();
        } else if (identities->parsed()) {
            sections = {verify::Section::specfun, verify::Section::geometry,
                        verify::Section::identities};
        } else if (funk_hecke->parsed()) {
            sections = {verify::Section::funk_hecke};
        } else if (spectrum->parsed()) {
            sections = {verify::Section::spectrum};
        }
        const auto rep = verify::run_suite(cfg, sections);
        detail::write_output(verify::to_json(rep).dump(1) + "\n", out_path);
        std::cerr << "checks: " << rep.passed << " passed, " << rep.failed << " failed ("
                  << rep.runtime_ms << " ms)\n";
        return rep.failed == 0 ? 0 : 1;
    } catch (const verify::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("choquard");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& s : full) argv.push_back(s.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace choquard::cli
