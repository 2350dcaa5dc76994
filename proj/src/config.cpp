#include "elastica/config.hpp"

#include "elastica/shapes.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <sstream>

namespace elastica {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(path + ": unknown key '" + it.key() + "'");
}

double number_at(const json& j, const std::string& path, const std::string& key, double fallback,
                 bool* present = nullptr) {
    if (!j.contains(key)) {
        if (present) *present = false;
        return fallback;
    }
    if (present) *present = true;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

int int_at(const json& j, const std::string& path, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    return v.get<int>();
}

bool bool_at(const json& j, const std::string& path, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

std::string string_at(const json& j, const std::string& path, const std::string& key,
                      const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

ShapeSpec shape_spec_at(const json& j, const std::string& path) {
    expect_keys(j, path, {"name", "params"});
    ShapeSpec s;
    s.name = string_at(j, path, "name", "");
    if (s.name.empty()) throw ConfigError(path + ".name: required");
    if (j.contains("params")) {
        const json& p = j.at("params");
        if (!p.is_object()) throw ConfigError(path + ".params: expected an object");
        for (auto it = p.begin(); it != p.end(); ++it) {
            if (!it.value().is_number())
                throw ConfigError(path + ".params." + it.key() + ": expected a number");
            s.params[it.key()] = it.value().get<double>();
        }
    }
    return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_keys(j, "$", {"scatter", "shape", "noise", "solver", "sampling", "output",
                          "initial_guess"});

    ExperimentConfig c;
    if (j.contains("scatter")) {
        const json& s = j.at("scatter");
        expect_keys(s, "scatter",
                    {"k", "wavelength_per_diameter", "incident_count", "measurement_count",
                     "nystrom_points", "coupling"});
        bool has_k = false, has_wl = false;
        const double kv = number_at(s, "scatter", "k", 0.0, &has_k);
        const double wl = number_at(s, "scatter", "wavelength_per_diameter", 0.0, &has_wl);
        if (has_k && has_wl)
            throw ConfigError("scatter: give either k or wavelength_per_diameter, not both");
        if (has_k) {
            if (!(kv > 0.0)) throw ConfigError("scatter.k: must be positive");
            c.k = kv;
        }
        if (has_wl) {
            if (!(wl > 0.0)) throw ConfigError("scatter.wavelength_per_diameter: must be positive");
            c.wavelength_per_diameter = wl;
        }
        c.coupling = number_at(s, "scatter", "coupling", c.coupling);
        if (c.coupling < 0.0) throw ConfigError("scatter.coupling: must be >= 0");
        c.incident_count = int_at(s, "scatter", "incident_count", c.incident_count);
        c.measurement_count = int_at(s, "scatter", "measurement_count", c.measurement_count);
        c.nystrom_points = int_at(s, "scatter", "nystrom_points", c.nystrom_points);
        if (c.incident_count < 1 || c.measurement_count < 1)
            throw ConfigError("scatter: direction counts must be positive");
        if (c.nystrom_points < 16 || c.nystrom_points % 2)
            throw ConfigError("scatter.nystrom_points: must be even and >= 16");
    }
    if (j.contains("shape")) {
        const json& s = j.at("shape");
        expect_keys(s, "shape", {"name", "params", "n"});
        json spec = s;
        spec.erase("n");
        c.shape = shape_spec_at(spec, "shape");
        c.n = int_at(s, "shape", "n", c.n);
        if (c.n < 8) throw ConfigError("shape.n: must be >= 8");
    }
    if (j.contains("noise")) {
        const json& s = j.at("noise");
        expect_keys(s, "noise", {"relative_level", "seed"});
        c.noise_level = number_at(s, "noise", "relative_level", c.noise_level);
        if (c.noise_level < 0.0) throw ConfigError("noise.relative_level: must be >= 0");
        const double seed = number_at(s, "noise", "seed", static_cast<double>(c.seed));
        if (seed < 0.0 || seed != std::floor(seed))
            throw ConfigError("noise.seed: must be a nonnegative integer");
        c.seed = static_cast<std::uint64_t>(seed);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        expect_keys(s, "solver",
                    {"gn_tolerance", "alpha_initial", "alpha_factor", "discrepancy_factor",
                     "max_gn_iters", "hessian_mode", "penalty", "rest", "alpha_floor_factor"});
        c.solver.gn_tolerance = number_at(s, "solver", "gn_tolerance", c.solver.gn_tolerance);
        c.solver.alpha_initial = number_at(s, "solver", "alpha_initial", c.solver.alpha_initial);
        c.solver.alpha_factor = number_at(s, "solver", "alpha_factor", c.solver.alpha_factor);
        c.solver.discrepancy_factor =
            number_at(s, "solver", "discrepancy_factor", c.solver.discrepancy_factor);
        c.solver.alpha_floor_factor =
            number_at(s, "solver", "alpha_floor_factor", c.solver.alpha_floor_factor);
        c.solver.max_gn_iters = int_at(s, "solver", "max_gn_iters", c.solver.max_gn_iters);
        if (!(c.solver.gn_tolerance > 0.0) || !(c.solver.discrepancy_factor > 1.0) ||
            !(c.solver.alpha_factor > 0.0 && c.solver.alpha_factor < 1.0) ||
            c.solver.max_gn_iters < 1)
            throw ConfigError("solver: settings out of range");
        const std::string mode =
            string_at(s, "solver", "hessian_mode", "gauss_newton_intrinsic");
        if (mode == "gauss_newton_intrinsic")
            c.solver.hessian_mode = HessianMode::kGaussNewtonIntrinsic;
        else if (mode == "gradient_metric")
            c.solver.hessian_mode = HessianMode::kGradientMetric;
        else
            throw ConfigError("solver.hessian_mode: unknown mode '" + mode + "'");
        const std::string pen = string_at(s, "solver", "penalty", "bending");
        if (pen == "bending")
            c.penalty = Penalty::kBending;
        else if (pen == "bending_plus_mobius")
            c.penalty = Penalty::kBendingPlusMobius;
        else
            throw ConfigError("solver.penalty: unknown penalty '" + pen + "'");
        const std::string rest = string_at(s, "solver", "rest", "initial");
        if (rest == "initial")
            c.rest_is_initial = true;
        else if (rest == "straight")
            c.rest_is_initial = false;
        else
            throw ConfigError("solver.rest: expected 'initial' or 'straight'");
    }
    if (j.contains("initial_guess")) c.initial_guess = shape_spec_at(j.at("initial_guess"), "initial_guess");
    if (j.contains("sampling")) {
        const json& s = j.at("sampling");
        expect_keys(s, "sampling", {"box", "resolution", "cutoff", "level", "pseudo_noise"});
        if (s.contains("box")) {
            const json& b = s.at("box");
            expect_keys(b, "sampling.box", {"xmin", "xmax", "ymin", "ymax"});
            c.sampling_box.xmin = number_at(b, "sampling.box", "xmin", c.sampling_box.xmin);
            c.sampling_box.xmax = number_at(b, "sampling.box", "xmax", c.sampling_box.xmax);
            c.sampling_box.ymin = number_at(b, "sampling.box", "ymin", c.sampling_box.ymin);
            c.sampling_box.ymax = number_at(b, "sampling.box", "ymax", c.sampling_box.ymax);
            if (!(c.sampling_box.xmax > c.sampling_box.xmin) ||
                !(c.sampling_box.ymax > c.sampling_box.ymin))
                throw ConfigError("sampling.box: empty box");
        }
        c.sampling_resolution = int_at(s, "sampling", "resolution", c.sampling_resolution);
        if (c.sampling_resolution < 2) throw ConfigError("sampling.resolution: must be >= 2");
        c.sampling_cutoff = number_at(s, "sampling", "cutoff", c.sampling_cutoff);
        if (!(c.sampling_cutoff >= 0.0) || c.sampling_cutoff >= 1.0)
            throw ConfigError("sampling.cutoff: must lie in [0, 1)");
        bool has_level = false;
        const double level = number_at(s, "sampling", "level", 0.0, &has_level);
        if (has_level) {
            if (!(level > 0.0)) throw ConfigError("sampling.level: must be positive");
            c.sampling_level = level;
        }
        c.sampling_pseudo_noise = number_at(s, "sampling", "pseudo_noise", c.sampling_pseudo_noise);
        if (!(c.sampling_pseudo_noise > 0.0))
            throw ConfigError("sampling.pseudo_noise: must be positive");
    }
    if (j.contains("output")) {
        const json& s = j.at("output");
        expect_keys(s, "output", {"directory", "snapshots"});
        c.output_directory = string_at(s, "output", "directory", c.output_directory);
        c.snapshots = bool_at(s, "output", "snapshots", c.snapshots);
    }
    return c;
}

std::string ExperimentConfig::canonical_json() const {
    json j;
    if (k) j["scatter"]["k"] = *k;
    if (wavelength_per_diameter)
        j["scatter"]["wavelength_per_diameter"] = *wavelength_per_diameter;
    if (coupling > 0.0) j["scatter"]["coupling"] = coupling;
    j["scatter"]["incident_count"] = incident_count;
    j["scatter"]["measurement_count"] = measurement_count;
    j["scatter"]["nystrom_points"] = nystrom_points;
    j["shape"]["name"] = shape.name;
    for (const auto& [key, value] : shape.params) j["shape"]["params"][key] = value;
    j["shape"]["n"] = n;
    j["noise"]["relative_level"] = noise_level;
    j["noise"]["seed"] = seed;
    j["solver"]["gn_tolerance"] = solver.gn_tolerance;
    j["solver"]["alpha_initial"] = solver.alpha_initial;
    j["solver"]["alpha_factor"] = solver.alpha_factor;
    j["solver"]["discrepancy_factor"] = solver.discrepancy_factor;
    j["solver"]["max_gn_iters"] = solver.max_gn_iters;
    j["solver"]["hessian_mode"] = solver.hessian_mode == HessianMode::kGaussNewtonIntrinsic
                                      ? "gauss_newton_intrinsic"
                                      : "gradient_metric";
    j["solver"]["penalty"] = penalty == Penalty::kBending ? "bending" : "bending_plus_mobius";
    j["solver"]["rest"] = rest_is_initial ? "initial" : "straight";
    if (initial_guess) {
        j["initial_guess"]["name"] = initial_guess->name;
        for (const auto& [key, value] : initial_guess->params)
            j["initial_guess"]["params"][key] = value;
    }
    j["sampling"]["box"] = {{"xmin", sampling_box.xmin},
                            {"xmax", sampling_box.xmax},
                            {"ymin", sampling_box.ymin},
                            {"ymax", sampling_box.ymax}};
    j["sampling"]["resolution"] = sampling_resolution;
    j["sampling"]["cutoff"] = sampling_cutoff;
    if (sampling_level) j["sampling"]["level"] = *sampling_level;
    j["sampling"]["pseudo_noise"] = sampling_pseudo_noise;
    j["output"]["directory"] = output_directory;
    j["output"]["snapshots"] = snapshots;
    return j.dump(2) + "\n";
}

double ExperimentConfig::wavenumber(const ShapePoint& truth) const {
    if (k) return *k;
    const double ratio = wavelength_per_diameter.value_or(1.0);
    const double diam = polygon_diameter(reconstruct_polygon(truth));
    return kTwoPi / (ratio * diam);
}

ScatterConfig ExperimentConfig::scatter_config(const ShapePoint& truth) const {
    ScatterConfig sc = ScatterConfig::equidistant(wavenumber(truth), incident_count,
                                                  measurement_count, nystrom_points);
    sc.coupling = coupling;
    return sc;
}

}  // namespace elastica
