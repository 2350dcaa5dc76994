#ifndef ELASTICA_IO_HPP
#define ELASTICA_IO_HPP

#include "elastica/geometry.hpp"
#include "elastica/scatter.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace elastica {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// 17-significant-digit decimal rendering used by every CSV writer.
std::string format_double(double v);

/// Shape CSV: header `# shape-point v1, n=<n>`, one `tau_i, theta_i` row per
/// subinterval, footer rows `L,<value>` and `p,<x>,<y>`.
std::string shape_to_csv(const ShapePoint& m);
ShapePoint shape_from_csv(const std::string& text);
void write_shape_csv(const std::filesystem::path& path, const ShapePoint& m);
ShapePoint read_shape_csv(const std::filesystem::path& path);

/// Polygon CSV: `x,y` vertex rows.
void write_polygon_csv(const std::filesystem::path& path, const std::vector<Vec2>& polygon);

/// Far-field CSV: complex entries `re+imj`, one row per measurement
/// direction; JSON sidecar records k, the direction grids, 2N and delta.
struct FarFieldSidecar {
    double k = 0.0;
    std::vector<Vec2> incident_dirs;
    std::vector<Vec2> measurement_dirs;
    int nystrom_points = 0;
    std::optional<double> delta;
};

std::string farfield_to_csv(const FarField& f);
FarField farfield_from_csv(const std::string& text);
void write_farfield(const std::filesystem::path& csv_path, const FarField& f,
                    const FarFieldSidecar& sidecar);
std::pair<FarField, FarFieldSidecar> read_farfield(const std::filesystem::path& csv_path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a 64-bit content hash, hex encoded; manifest entries use it.
std::string content_hash(const std::string& bytes);

}  // namespace elastica

#endif
