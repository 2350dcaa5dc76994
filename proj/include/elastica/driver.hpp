#ifndef ELASTICA_DRIVER_HPP
#define ELASTICA_DRIVER_HPP

#include "elastica/config.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace elastica {

/// Exit codes shared by the CLI and the in-process drivers.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitNoConvergence = 3,
    kExitIoError = 4,
};

struct DriverOptions {
    std::filesystem::path out_dir;                  // overrides config output.directory if set
    std::optional<std::filesystem::path> initial;   // shape CSV for reconstruct
    std::optional<std::uint64_t> seed;              // overrides config noise.seed
    bool snapshots = false;
    bool diagnostics = false;
};

struct ForwardArtifacts {
    std::filesystem::path truth_shape;
    std::filesystem::path truth_polygon;
    std::filesystem::path clean_farfield;
    std::filesystem::path noisy_farfield;
    double delta = 0.0;
};

struct ReconstructArtifacts {
    std::filesystem::path shape;
    std::filesystem::path polygon;
    std::filesystem::path trace;
    std::filesystem::path overlay;
    double alpha_final = 0.0;
    double residual = 0.0;
    double delta = 0.0;
    bool discrepancy_reached = false;
    ShapePoint reconstruction;
};

struct SampleArtifacts {
    std::filesystem::path indicator_csv;
    std::filesystem::path heatmap;
    std::filesystem::path level_shape;
    std::filesystem::path level_polygon;
    double level = 0.0;
    bool fit_converged = false;
    ShapePoint level_line;
};

/// Simulate the configured ground truth: truth shape/polygon CSV, clean and
/// noisy far-field files with delta in the sidecar, manifest.
ForwardArtifacts cmd_forward(const ExperimentConfig& config, const DriverOptions& options);

/// Tikhonov reconstruction from a noisy far-field file.
ReconstructArtifacts cmd_reconstruct(const ExperimentConfig& config,
                                     const std::filesystem::path& data_csv,
                                     const DriverOptions& options);

/// Factorization-method indicator and level-line initial guess.
SampleArtifacts cmd_sample(const ExperimentConfig& config, const std::filesystem::path& data_csv,
                           const DriverOptions& options);

/// Materialize the configured ground-truth shape with diagnostics.
std::filesystem::path cmd_shapes(const ExperimentConfig& config, const DriverOptions& options);

/// Build the configured truth / initial-guess shapes.
ShapePoint build_truth_shape(const ExperimentConfig& config);
ShapePoint build_initial_guess(const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& initial_csv);

}  // namespace elastica

#endif
