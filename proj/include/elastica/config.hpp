#ifndef ELASTICA_CONFIG_HPP
#define ELASTICA_CONFIG_HPP

#include "elastica/optimize.hpp"
#include "elastica/sampling.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace elastica {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ShapeSpec {
    std::string name;
    std::map<std::string, double> params;
};

/// Parsed and validated experiment description. Unknown keys anywhere in
/// the document are rejected with the offending path.
struct ExperimentConfig {
    // scatter
    std::optional<double> k;
    std::optional<double> wavelength_per_diameter;
    int incident_count = 20;
    int measurement_count = 40;
    int nystrom_points = 128;
    double coupling = 0.0;  // combined-layer coupling; 0 means "use k"


    // shape (ground truth)
    ShapeSpec shape{"circle", {}};
    int n = 100;

    // noise
    double noise_level = 0.05;
    std::uint64_t seed = 1;

    // solver
    SolverSettings solver;
    Penalty penalty = Penalty::kBending;
    bool rest_is_initial = true;  // false: straight (absolute) rest state
    std::optional<ShapeSpec> initial_guess;

    // sampling
    GridBox sampling_box{-2.5, 2.5, -2.5, 2.5};
    int sampling_resolution = 100;
    double sampling_cutoff = 1e-3;
    std::optional<double> sampling_level;  // absent: Otsu threshold of 1/chi
    double sampling_pseudo_noise = 0.01;

    // output
    std::string output_directory = "out";
    bool snapshots = false;

    static ExperimentConfig from_json_text(const std::string& text);
    std::string canonical_json() const;

    /// Wavenumber; resolves wavelength_per_diameter against the truth
    /// shape's diameter when k is not given directly.
    double wavenumber(const ShapePoint& truth) const;
    ScatterConfig scatter_config(const ShapePoint& truth) const;
};

}  // namespace elastica

#endif
