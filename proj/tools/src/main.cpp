#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "critical_hawkes/analysis.hpp"
#include "critical_hawkes/config_file.hpp"
#include "critical_hawkes/csv_io.hpp"
#include "critical_hawkes/event_log.hpp"
#include "critical_hawkes/hawkes_engine.hpp"
#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rescale.hpp"
#include "critical_hawkes/rng.hpp"
#include "critical_hawkes/runner.hpp"
#include "critical_hawkes/sde_engine.hpp"
#include "critical_hawkes/verification.hpp"

namespace ch = critical_hawkes;

namespace {

/// Invocation error outside CLI11's own parsing: bad flag values, artifact
/// collisions. Reported like a config error (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimArgs {
    std::string config_path;
    std::string out_dir;
    std::size_t replicas{1};
    std::uint64_t seed{0};
    std::string threads{"auto"};
    bool overwrite{false};
    bool event_logs{false};
};

struct VerifyArgs {
    std::string out_dir;
    std::size_t replicas{2000};
    std::vector<std::size_t> n_ladder{100, 1000, 10000};
    std::uint64_t seed{20260816};
    std::string threads{"auto"};
    bool overwrite{false};
};

[[nodiscard]] unsigned parse_threads(const std::string& text) {
    if (text == "auto") {
        return 0;
    }
    unsigned value{};
    const char* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (result.ec != std::errc{} || result.ptr != end || value == 0) {
        throw UsageError("--threads expects a positive integer or 'auto', got '" + text + "'");
    }
    return value;
}

/// Master seed precedence: CRITICAL_HAWKES_SEED, then --seed, then fallback
/// (the config seed, or the battery default for verify).
[[nodiscard]] std::uint64_t resolve_seed(const CLI::App& command, std::uint64_t flag_value,
                                         std::uint64_t fallback) {
    if (const char* env = std::getenv("CRITICAL_HAWKES_SEED")) {
        const std::string text(env);
        std::uint64_t value{};
        const char* end = text.data() + text.size();
        const auto result = std::from_chars(text.data(), end, value);
        if (result.ec != std::errc{} || result.ptr != end) {
            throw UsageError(
                "environment variable CRITICAL_HAWKES_SEED must be an unsigned 64-bit "
                "integer, got '" +
                text + "'");
        }
        return value;
    }
    if (command.count("--seed") > 0) {
        return flag_value;
    }
    return fallback;
}

[[nodiscard]] std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void ensure_writable(const std::filesystem::path& file, bool overwrite) {
    if (!overwrite && std::filesystem::exists(file)) {
        throw UsageError(file.string() + " already exists (pass --overwrite to replace it)");
    }
}

[[nodiscard]] std::string numbered(const char* stem, std::size_t replica, const char* extension) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%s_%04zu.%s", stem, replica, extension);
    return buffer;
}

int run_params(const std::string& config_path) {
    const ch::RunConfig config = ch::load_run_config(config_path);
    const auto limit = ch::limit_params(config.model);
    const std::pair<const char*, double> rows[] = {
        {"beta_pi", limit.beta_pi},   {"sigma_pi", limit.sigma_pi}, {"beta_y", limit.beta_y},
        {"theta_y", limit.theta_y},   {"alpha_y", limit.alpha_y},   {"sigma_y", limit.sigma_y},
        {"rho", limit.rho},           {"f_prime0", limit.f_prime0},
        {"f_second0", limit.f_second0}, {"pi0", limit.pi0},         {"y0", limit.y0},
    };
    for (const auto& [name, value] : rows) {
        std::cout << name << " = " << ch::format_numeric(value) << '\n';
    }
    return 0;
}

int run_boundary(const std::string& config_path) {
    const ch::RunConfig config = ch::load_run_config(config_path);
    const auto limit = ch::limit_params(config.model);
    const auto boundary = ch::classify_boundary(limit);
    std::cout << "boundary at zero: "
              << (boundary.attainable ? "Attainable (reflected upward)" : "Unattainable")
              << '\n';
    // Two probe depths separate a finite zero-side integral (stable between
    // probes) from a divergent one (blows up, or keeps growing, as the probe
    // deepens).
    const auto narrow = ch::scale_integrals(limit, 1e-6, 1e3);
    const auto wide = ch::scale_integrals(limit, 1e-12, 1e3);
    const bool zero_divergent = !wide.zero_side_finite ||
                                wide.zero_side_value > 2.0 * narrow.zero_side_value;
    char wide_text[32] = "above threshold";
    if (wide.zero_side_finite) {
        std::snprintf(wide_text, sizeof wide_text, "%.4g", wide.zero_side_value);
    }
    char evidence[128];
    std::snprintf(evidence, sizeof evidence, " (%.4g at probe 1e-6, %s at 1e-12)",
                  narrow.zero_side_value, wide_text);
    std::cout << "scale integral toward zero: " << (zero_divergent ? "divergent" : "finite")
              << evidence << '\n';
    std::cout << "scale integral toward infinity: "
              << (narrow.infinity_side_finite ? "finite" : "divergent") << '\n';
    return 0;
}

int run_sim_hawkes(const CLI::App& command, const SimArgs& args) {
    const ch::RunConfig config = ch::load_run_config(args.config_path);
    const std::uint64_t seed = resolve_seed(command, args.seed, config.model.seed);
    const unsigned threads = parse_threads(args.threads);
    const auto dir = prepare_out_dir(args.out_dir);

    ensure_writable(dir / "ensemble.csv", args.overwrite);
    for (std::size_t replica = 0; replica < args.replicas; ++replica) {
        ensure_writable(dir / numbered("path", replica, "csv"), args.overwrite);
        if (args.event_logs) {
            ensure_writable(dir / numbered("events", replica, "bin"), args.overwrite);
        }
    }

    ch::EngineOptions engine_options;
    engine_options.record_events = args.event_logs;
    const auto paths =
        ch::parallel_replicas(args.replicas, threads, [&](std::size_t replica) {
            const auto record = ch::simulate_path(config.model, ch::replica_seed(seed, replica),
                                                  engine_options);
            if (args.event_logs) {
                ch::write_event_log(dir / numbered("events", replica, "bin"), record.events);
            }
            auto macro = ch::to_macro(record);
            ch::write_path_csv(dir / numbered("path", replica, "csv"), macro);
            return macro;
        });
    ch::write_ensemble_csv(dir / "ensemble.csv", ch::compute_ensemble_stats(paths));
    return 0;
}

int run_sim_sde(const CLI::App& command, const SimArgs& args) {
    const ch::RunConfig config = ch::load_run_config(args.config_path);
    const auto limit = ch::limit_params(config.model);
    const auto scheme =
        ch::scheme_for(config.sde_scheme, config.model.horizon_macro,
                       config.model.grid_points * config.sde_steps_per_point);
    const std::uint64_t seed = resolve_seed(command, args.seed, config.model.seed);
    const unsigned threads = parse_threads(args.threads);
    const auto dir = prepare_out_dir(args.out_dir);

    ensure_writable(dir / "ensemble.csv", args.overwrite);
    for (std::size_t replica = 0; replica < args.replicas; ++replica) {
        ensure_writable(dir / numbered("path", replica, "csv"), args.overwrite);
    }

    const auto paths =
        ch::parallel_replicas(args.replicas, threads, [&](std::size_t replica) {
            auto macro = ch::simulate_sde(limit, scheme, ch::replica_seed(seed, replica),
                                          config.sde_steps_per_point);
            ch::write_path_csv(dir / numbered("path", replica, "csv"), macro);
            return macro;
        });
    ch::write_ensemble_csv(dir / "ensemble.csv", ch::compute_ensemble_stats(paths));
    return 0;
}

int run_verify(const CLI::App& command, const VerifyArgs& args) {
    ch::VerifyOptions options;
    options.replicas = args.replicas;
    options.n_ladder = args.n_ladder;
    options.threads = parse_threads(args.threads);
    options.seed = resolve_seed(command, args.seed, options.seed);
    options.progress = &std::cerr;

    const auto dir = prepare_out_dir(args.out_dir);
    const auto summary = dir / "verify_summary.csv";
    ensure_writable(summary, args.overwrite);

    const auto results = ch::run_verification(options);
    bool all_pass = true;
    for (const auto& result : results) {
        std::cout << ch::format_criterion_line(result) << '\n';
        all_pass = all_pass && result.pass;
    }
    ch::write_verification_summary(summary, results);
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical mean-field order-flow simulator and its diffusion limit"};
    app.require_subcommand(1);

    SimArgs hawkes_args;
    SimArgs sde_args;
    VerifyArgs verify_args;
    std::string params_config;
    std::string boundary_config;

    CLI::App* params_cmd =
        app.add_subcommand("params", "Print the diffusion-limit coefficients of a model");
    params_cmd->add_option("--config", params_config, "model configuration file")->required();

    CLI::App* boundary_cmd = app.add_subcommand(
        "boundary", "Classify the volatility boundary at zero for a model");
    boundary_cmd->add_option("--config", boundary_config, "model configuration file")->required();

    const auto add_sim_options = [](CLI::App* command, SimArgs& args) {
        command->add_option("--config", args.config_path, "model configuration file")->required();
        command->add_option("--out", args.out_dir, "output directory (created if absent)")
            ->required();
        command->add_option("--replicas", args.replicas, "independent replica paths")
            ->check(CLI::PositiveNumber);
        command->add_option("--seed", args.seed, "master seed (overrides the config seed)");
        command->add_option("--threads", args.threads, "worker threads, or 'auto'");
        command->add_flag("--overwrite", args.overwrite, "replace existing output files");
    };

    CLI::App* hawkes_cmd = app.add_subcommand(
        "sim-hawkes", "Simulate order-flow replicas and write rescaled path CSVs");
    add_sim_options(hawkes_cmd, hawkes_args);
    hawkes_cmd->add_flag("--event-logs", hawkes_args.event_logs,
                         "also write per-replica binary event logs");

    CLI::App* sde_cmd = app.add_subcommand(
        "sim-sde", "Integrate the diffusion limit on the same grid and write path CSVs");
    add_sim_options(sde_cmd, sde_args);

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Run the scaling-limit verification battery and write its summary");
    verify_cmd->add_option("--out", verify_args.out_dir, "output directory (created if absent)")
        ->required();
    verify_cmd->add_option("--replicas", verify_args.replicas, "replicas per ensemble");
    verify_cmd
        ->add_option("--n-ladder", verify_args.n_ladder,
                     "comma-separated system sizes, e.g. 100,1000,10000")
        ->delimiter(',');
    verify_cmd->add_option("--seed", verify_args.seed, "battery master seed");
    verify_cmd->add_option("--threads", verify_args.threads, "worker threads, or 'auto'");
    verify_cmd->add_flag("--overwrite", verify_args.overwrite, "replace an existing summary");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(params_cmd)) {
            return run_params(params_config);
        }
        if (app.got_subcommand(boundary_cmd)) {
            return run_boundary(boundary_config);
        }
        if (app.got_subcommand(hawkes_cmd)) {
            return run_sim_hawkes(*hawkes_cmd, hawkes_args);
        }
        if (app.got_subcommand(sde_cmd)) {
            return run_sim_sde(*sde_cmd, sde_args);
        }
        return run_verify(*verify_cmd, verify_args);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 1;
    } catch (const ch::ConfigParseError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    } catch (const UsageError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 3;
    }
}
