#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gftlab/config.hpp"
#include "gftlab/errors.hpp"
#include "gftlab/report.hpp"
#include "gftlab/suites.hpp"

// Command-line front end.
//
//   run <suite> [--config FILE] [--seed N] [--trials N] [--t-max N]
//               [--threads N] [--out PATH] [--format csv|json]
//   list-suites
//   describe <suite>
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad
// configuration or I/O. Option precedence: built-in default < config file <
// GFTLAB_SEED / GFTLAB_THREADS environment < command-line flag. The thread
// count never changes any reported number.

namespace gftlab {

namespace cli_detail {

inline std::optional<std::string> env_value(const char* name) {
    const char* raw = std::getenv(name);
    if (!raw || *raw == '\0') return std::nullopt;
    return std::string(raw);
}

inline std::uint64_t parse_uint64(const std::string& text, const std::string& what) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0')
        throw ConfigError(what + ": expected an unsigned integer, got \"" + text + "\"");
    return static_cast<std::uint64_t>(value);
}

inline int parse_int(const std::string& text, const std::string& what) {
    char* end = nullptr;
    errno = 0;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0' || value < 0 || value > 1 << 20)
        throw ConfigError(what + ": expected a small non-negative integer, got \"" + text + "\"");
    return static_cast<int>(value);
}

inline void apply_config(const ExperimentConfig& cfg, const std::string& suite_name,
                         SuiteOptions& opts) {
    if (cfg.suite && *cfg.suite != suite_name)
        throw ConfigError("config file is for suite \"" + *cfg.suite +
                          "\" but the command line asked for \"" + suite_name + "\"");
    if (cfg.seed) opts.seed = *cfg.seed;
    if (cfg.trials) opts.trials = *cfg.trials;
    if (cfg.t_max) opts.t_max = *cfg.t_max;
    opts.instances = cfg.instances;
    opts.strategy = cfg.strategy;
    for (const auto& [name, value] : cfg.tolerances) opts.tolerances[name] = value;
}

inline int emit_report(const Report& report, const std::string& out_path,
                       const std::string& format) {
    std::string payload;
    if (format == "json")
        payload = to_json(report).dump(2) + "\n";
    else
        payload = to_csv(report);

    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + out_path);
        out << payload;
        if (!out) throw IoError("failed while writing: " + out_path);
        std::size_t passed = 0;
        for (const auto& row : report.rows) passed += row.pass ? 1 : 0;
        std::fprintf(stdout, "%s: %zu/%zu checks pass, %.2fs -> %s\n", report.suite.c_str(),
                     passed, report.rows.size(), report.wall_time_seconds, out_path.c_str());
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
    using namespace cli_detail;

    CLI::App app{"verification suites for sample-based bilateral-trade pricing"};
    app.require_subcommand(1);

    std::string suite_name;
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed_flag = 0;
    std::int64_t trials_flag = 0;
    std::int64_t tmax_flag = 0;
    int threads_flag = 0;

    CLI::App* run = app.add_subcommand("run", "run one suite (or \"all\") and emit its report");
    run->add_option("suite", suite_name, "suite name; see list-suites")->required();
    run->add_option("--config", config_path, "JSON experiment config");
    CLI::Option* seed_opt = run->add_option("--seed", seed_flag, "top-level RNG seed");
    CLI::Option* trials_opt =
        run->add_option("--trials", trials_flag, "Monte Carlo trials per cell")
            ->check(CLI::PositiveNumber);
    CLI::Option* tmax_opt = run->add_option("--t-max,--T-max", tmax_flag, "simulation horizon")
                                ->check(CLI::PositiveNumber);
    CLI::Option* threads_opt =
        run->add_option("--threads", threads_flag, "worker threads (cannot change results)")
            ->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_path, "write the report here instead of stdout");
    run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* list = app.add_subcommand("list-suites", "list suite names with one-line summaries");

    std::string describe_name;
    CLI::App* describe = app.add_subcommand("describe", "explain one suite in detail");
    describe->add_option("suite", describe_name, "suite name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& suite : suite_registry())
                std::printf("%-18s %s\n", suite.name.c_str(), suite.summary.c_str());
            std::printf("%-18s %s\n", "all", "every suite above, claim ids prefixed by suite name");
            return 0;
        }

        if (describe->parsed()) {
            if (describe_name == "all") {
                std::printf("all\n  Runs every suite in order; claim ids come back as\n"
                            "  <suite>/<claim>. Options apply to every suite they touch.\n");
                return 0;
            }
            const SuiteInfo* suite = find_suite(describe_name);
            if (!suite) throw ConfigError("unknown suite: " + describe_name);
            std::printf("%s\n  %s\n\n%s\n", suite->name.c_str(), suite->summary.c_str(),
                        suite->details.c_str());
            return 0;
        }

        // run
        if (suite_name != "all" && !find_suite(suite_name))
            throw ConfigError("unknown suite: " + suite_name);

        SuiteOptions opts;
        if (!config_path.empty()) apply_config(load_config(config_path), suite_name, opts);
        if (const auto env_seed = env_value("GFTLAB_SEED"))
            opts.seed = parse_uint64(*env_seed, "GFTLAB_SEED");
        if (const auto env_threads = env_value("GFTLAB_THREADS"))
            opts.threads = parse_int(*env_threads, "GFTLAB_THREADS");
        if (seed_opt->count() > 0) opts.seed = seed_flag;
        if (trials_opt->count() > 0) opts.trials = trials_flag;
        if (tmax_opt->count() > 0) opts.t_max = tmax_flag;
        if (threads_opt->count() > 0) opts.threads = threads_flag;

        const Report report = run_suite(suite_name, opts);
        return emit_report(report, out_path, format);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace gftlab
