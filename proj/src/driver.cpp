#include "elastica/driver.hpp"

#include "elastica/io.hpp"
#include "elastica/shapes.hpp"
#include "elastica/svg.hpp"
#include "elastica/version.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace elastica {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve_out_dir(const ExperimentConfig& config, const DriverOptions& options) {
    return options.out_dir.empty() ? fs::path(config.output_directory) : options.out_dir;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const DriverOptions& options) {
    if (options.seed) config.seed = *options.seed;
    if (options.snapshots) config.snapshots = true;
    return config;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& config,
                    const std::vector<fs::path>& inputs) {
    json j;
    j["tool"] = "elastica-scatter";
    j["version"] = kVersion;
    j["config_hash"] = content_hash(config.canonical_json());
    json in = json::object();
    for (const auto& p : inputs) in[p.filename().string()] = content_hash(read_text_file(p));
    j["inputs"] = in;
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

std::vector<Vec2> closed_curve_points(const ShapePoint& m) {
    std::vector<Vec2> pts = reconstruct_polygon(m);
    pts.back() = pts.front();
    return pts;
}

ScatterConfig config_from_sidecar(const FarFieldSidecar& s) {
    ScatterConfig c;
    c.k = s.k;
    c.incident_dirs = s.incident_dirs;
    c.measurement_dirs = s.measurement_dirs;
    c.nystrom_points = s.nystrom_points;
    c.validate();
    return c;
}

}  // namespace

ShapePoint build_truth_shape(const ExperimentConfig& config) {
    return shape_library(config.shape.name, config.shape.params, config.n);
}

ShapePoint build_initial_guess(const ExperimentConfig& config,
                               const std::optional<fs::path>& initial_csv) {
    if (initial_csv) {
        ShapePoint m = read_shape_csv(*initial_csv);
        return restore_feasibility(m, 1e-10, 50);
    }
    if (config.initial_guess)
        return shape_library(config.initial_guess->name, config.initial_guess->params, config.n);
    throw ConfigError("no initial guess: give --initial <shape.csv> or an initial_guess section");
}

ForwardArtifacts cmd_forward(const ExperimentConfig& raw_config, const DriverOptions& options) {
    const ExperimentConfig config = apply_overrides(raw_config, options);
    const fs::path dir = resolve_out_dir(config, options);
    fs::create_directories(dir);

    const ShapePoint truth = build_truth_shape(config);
    const ScatterConfig sc = config.scatter_config(truth);
    const FarField clean = far_field_map(truth, sc);
    auto [noisy_stacked, delta] =
        add_noise(clean.stacked(), sc.data_weight(), config.noise_level, config.seed);
    const FarField noisy =
        FarField::from_stacked(noisy_stacked, clean.values.rows(), clean.values.cols());

    ForwardArtifacts out;
    out.delta = delta;
    out.truth_shape = dir / "truth_shape.csv";
    out.truth_polygon = dir / "truth_polygon.csv";
    out.clean_farfield = dir / "farfield_clean.csv";
    out.noisy_farfield = dir / "farfield_noisy.csv";

    write_shape_csv(out.truth_shape, truth);
    write_polygon_csv(out.truth_polygon, reconstruct_polygon(truth));

    FarFieldSidecar side;
    side.k = sc.k;
    side.incident_dirs = sc.incident_dirs;
    side.measurement_dirs = sc.measurement_dirs;
    side.nystrom_points = sc.nystrom_points;
    write_farfield(out.clean_farfield, clean, side);
    side.delta = delta;
    write_farfield(out.noisy_farfield, noisy, side);

    write_manifest(dir, config, {});
    return out;
}

ReconstructArtifacts cmd_reconstruct(const ExperimentConfig& raw_config, const fs::path& data_csv,
                                     const DriverOptions& options) {
    const ExperimentConfig config = apply_overrides(raw_config, options);
    const fs::path dir = resolve_out_dir(config, options);
    fs::create_directories(dir);

    auto [data, sidecar] = read_farfield(data_csv);
    if (static_cast<int>(sidecar.incident_dirs.size()) != config.incident_count ||
        static_cast<int>(sidecar.measurement_dirs.size()) != config.measurement_count)
        throw IoError("far-field data grids do not match the configured direction counts");
    const ScatterConfig sc = config_from_sidecar(sidecar);

    ShapePoint m0 = build_initial_guess(config, options.initial);
    if (m0.size() != config.n)
        throw ConfigError("initial guess has n=" + std::to_string(m0.size()) +
                          " but config asks for n=" + std::to_string(config.n));

    ScatterOperator forward(sc);
    TikhonovProblem problem;
    problem.forward = &forward;
    problem.data = data.stacked();
    problem.noise_level = sidecar.delta.value_or(0.0);
    problem.penalty = config.penalty;
    if (config.rest_is_initial) {
        problem.rest = m0;
    } else {
        problem.rest = m0;
        problem.rest.theta.setZero();  // straight rest state: zero turning angles
    }

    ContinuationResult res = discrepancy_continuation(problem, m0, config.solver);

    ReconstructArtifacts out;
    out.shape = dir / "reconstruction.csv";
    out.polygon = dir / "reconstruction_polygon.csv";
    out.trace = dir / "trace.jsonl";
    out.overlay = dir / "overlay.svg";
    out.alpha_final = res.alpha_final;
    out.residual = res.residual_norm;
    out.delta = problem.noise_level;
    out.discrepancy_reached = res.status == ContinuationStatus::kDiscrepancyReached;
    out.reconstruction = res.shape;

    write_shape_csv(out.shape, res.shape);
    write_polygon_csv(out.polygon, reconstruct_polygon(res.shape));
    write_text_file(out.trace, res.trace.to_jsonl());
    if (config.snapshots) {
        int idx = 0;
        for (const auto& stage : res.trace.stages) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%03d.csv", idx++);
            write_shape_csv(dir / "snapshots" / name, stage.shape);
        }
    }

    std::vector<SvgCurve> curves;
    try {
        const ShapePoint truth = build_truth_shape(config);
        curves.push_back({closed_curve_points(truth), "#2c9c42", "2,5", 2.0});
    } catch (const std::exception&) {
        // no configured truth; overlay carries initial guess + reconstruction
    }
    curves.push_back({closed_curve_points(m0), "#d4a017", "7,4", 2.0});
    curves.push_back({closed_curve_points(res.shape), "#2060c0", "", 2.5});
    write_text_file(out.overlay, svg_overlay(curves));

    if (options.diagnostics) {
        json diag;
        diag["alpha_final"] = res.alpha_final;
        diag["residual"] = res.residual_norm;
        diag["delta"] = problem.noise_level;
        diag["discrepancy_reached"] = out.discrepancy_reached;
        diag["stages"] = res.trace.stages.size();
        diag["penalty_final"] = penalty_value(problem, res.shape);
        write_text_file(dir / "diagnostics.json", diag.dump(2) + "\n");
    }
    write_manifest(dir, config, {data_csv});
    return out;
}

SampleArtifacts cmd_sample(const ExperimentConfig& raw_config, const fs::path& data_csv,
                           const DriverOptions& options) {
    const ExperimentConfig config = apply_overrides(raw_config, options);
    const fs::path dir = resolve_out_dir(config, options);
    fs::create_directories(dir);

    auto [data, sidecar] = read_farfield(data_csv);
    const ScatterConfig sc = config_from_sidecar(sidecar);
    const FarFieldOperator op = FarFieldOperator::build(data, sc);
    const QuarterInverse A(op, config.sampling_cutoff);
    const IndicatorField field =
        indicator_field(A, config.sampling_box, config.sampling_resolution, sc.k, op.grid);

    // indicator CSV: z_x, z_y, chi, inv_chi
    std::ostringstream csv;
    for (int ix = 0; ix < field.resolution; ++ix)
        for (int iy = 0; iy < field.resolution; ++iy) {
            const Vec2 z = field.grid_point(ix, iy);
            csv << format_double(z.x()) << "," << format_double(z.y()) << ","
                << format_double(field.chi(ix, iy)) << ","
                << format_double(field.inv_chi(ix, iy)) << "\n";
        }

    SampleArtifacts out;
    out.indicator_csv = dir / "indicator.csv";
    out.heatmap = dir / "indicator.svg";
    out.level_shape = dir / "level_line_shape.csv";
    out.level_polygon = dir / "level_line_polygon.csv";
    write_text_file(out.indicator_csv, csv.str());

    out.level = config.sampling_level ? *config.sampling_level : otsu_threshold(field.inv_chi);
    const ShapePoint m0 = initial_guess_from_indicator(field, config.n);
    const ChiFunction chi = ChiFunction::analytic(A, op.grid, sc.k);
    LevelLineFitResult fit =
        level_line_fit(chi, out.level, m0, config.solver, config.sampling_pseudo_noise);
    out.fit_converged = fit.discrepancy_reached && fit.simple;
    out.level_line = fit.shape;

    write_shape_csv(out.level_shape, fit.shape);
    write_polygon_csv(out.level_polygon, reconstruct_polygon(fit.shape));

    std::vector<SvgCurve> curves;
    try {
        const ShapePoint truth = build_truth_shape(config);
        curves.push_back({closed_curve_points(truth), "#2c9c42", "2,5", 2.0});
    } catch (const std::exception&) {
    }
    curves.push_back({closed_curve_points(fit.shape), "#2060c0", "", 2.5});
    write_text_file(out.heatmap, svg_heatmap(field, curves));

    write_manifest(dir, config, {data_csv});
    return out;
}

fs::path cmd_shapes(const ExperimentConfig& raw_config, const DriverOptions& options) {
    const ExperimentConfig config = apply_overrides(raw_config, options);
    const fs::path dir = resolve_out_dir(config, options);
    fs::create_directories(dir);

    const ShapePoint truth = build_truth_shape(config);
    const fs::path shape_path = dir / "shape.csv";
    write_shape_csv(shape_path, truth);
    write_polygon_csv(dir / "shape_polygon.csv", reconstruct_polygon(truth));
    write_text_file(dir / "shape.svg",
                    svg_overlay({{closed_curve_points(truth), "#2060c0", "", 2.5}}));

    if (options.diagnostics) {
        const EnergyReport bend = bending_energy(truth);
        json diag;
        diag["name"] = config.shape.name;
        diag["n"] = config.n;
        diag["length"] = truth.length;
        diag["bending_energy"] = {{"value", bend.value},
                                  {"gradient_norm", bend.gradient.norm()},
                                  {"hessian_frobenius", bend.hessian.norm()}};
        diag["turning_number"] = discrete_turning_number(truth);
        diag["simple"] = is_simple(reconstruct_polygon(truth));
        diag["closure_defect"] = closure_defect(truth).norm();
        diag["mobius_energy"] = mobius_energy(reconstruct_polygon(truth));
        write_text_file(dir / "shape_diagnostics.json", diag.dump(2) + "\n");
    }
    write_manifest(dir, config, {});
    return shape_path;
}

}  // namespace elastica
