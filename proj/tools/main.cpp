#include "elastica/driver.hpp"
#include "elastica/io.hpp"
#include "elastica/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Boundary reconstruction for 2D sound-soft scatterers"};
    app.set_version_flag("--version", elastica::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string initial_path;
    std::string data_path;
    std::int64_t seed = -1;
    bool snapshots = false;
    bool diagnostics = false;

    auto add_common = [&](CLI::App* cmd, bool needs_data) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "noise seed (overrides config)");
        cmd->add_flag("--snapshots", snapshots, "write per-alpha shape snapshots");
        cmd->add_flag("--diagnostics", diagnostics, "write diagnostics JSON");
        if (needs_data)
            cmd->add_option("--data", data_path,
                            "noisy far-field CSV (default: <config output "
                            "dir>/farfield_noisy.csv)");
    };

    CLI::App* forward = app.add_subcommand("forward", "simulate far-field data with noise");
    add_common(forward, false);
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "Tikhonov reconstruction from far-field data");
    add_common(reconstruct, true);
    reconstruct->add_option("--initial", initial_path, "initial guess shape CSV");
    CLI::App* sample =
        app.add_subcommand("sample", "factorization-method indicator and level-line fit");
    add_common(sample, true);
    double level = 0.0;
    sample->add_option("--level", level, "level of 1/chi to fit (default: Otsu threshold)");
    CLI::App* shapes = app.add_subcommand("shapes", "materialize the configured truth shape");
    add_common(shapes, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? elastica::kExitConfigError : elastica::kExitOk;
    }

    elastica::ExperimentConfig config;
    try {
        config = elastica::ExperimentConfig::from_json_text(
            elastica::read_text_file(config_path));
    } catch (const elastica::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return elastica::kExitIoError;
    } catch (const elastica::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return elastica::kExitConfigError;
    }

    elastica::DriverOptions options;
    options.out_dir = out_dir;
    options.snapshots = snapshots;
    options.diagnostics = diagnostics;
    if (seed >= 0) options.seed = static_cast<std::uint64_t>(seed);
    if (!initial_path.empty()) options.initial = initial_path;
    if (data_path.empty())
        data_path =
            (std::filesystem::path(config.output_directory) / "farfield_noisy.csv").string();

    try {
        if (forward->parsed()) {
            auto art = elastica::cmd_forward(config, options);
            std::printf("wrote %s (delta=%.6g)\n", art.noisy_farfield.string().c_str(),
                        art.delta);
            return elastica::kExitOk;
        }
        if (reconstruct->parsed()) {
            auto art = elastica::cmd_reconstruct(config, data_path, options);
            std::printf("alpha_final=%.6g residual=%.6g delta=%.6g %s\n", art.alpha_final,
                        art.residual, art.delta,
                        art.discrepancy_reached ? "(discrepancy reached)" : "(alpha floor)");
            return art.discrepancy_reached ? elastica::kExitOk : elastica::kExitNoConvergence;
        }
        if (sample->parsed()) {
            if (level > 0.0) config.sampling_level = level;
            auto art = elastica::cmd_sample(config, data_path, options);
            std::printf("level=%.6g level-line fit %s\n", art.level,
                        art.fit_converged ? "converged" : "flagged");
            return art.fit_converged ? elastica::kExitOk : elastica::kExitNoConvergence;
        }
        auto path = elastica::cmd_shapes(config, options);
        std::printf("wrote %s\n", path.string().c_str());
        return elastica::kExitOk;
    } catch (const elastica::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return elastica::kExitConfigError;
    } catch (const elastica::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return elastica::kExitIoError;
    } catch (const std::invalid_argument& e) {
        // incompatible data/config combinations (aperture mismatch etc.)
        std::cerr << "config error: " << e.what() << "\n";
        return elastica::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return elastica::kExitNoConvergence;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
