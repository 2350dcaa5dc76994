#ifndef ELASTICA_SHAPES_HPP
#define ELASTICA_SHAPES_HPP

#include "elastica/geometry.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace elastica {

/// Analytic ground-truth families sampled to n arclength-equispaced points
/// and feasibility-restored. Names: circle, ellipse, kite, three_lobe,
/// peanut, s_shape, horseshoe. Parameters default per family and can be
/// overridden by key (e.g. {"radius", 1.0} or {"center_x", 0.2}).
ShapePoint shape_library(const std::string& name, const std::map<std::string, double>& params,
                         int n);

/// Sample any closed parametric curve at arclength-equispaced parameters
/// and convert it to a feasible shape point with counterclockwise
/// orientation.
ShapePoint shape_from_curve(const std::function<Vec2(double)>& curve, int n);

std::vector<std::string> shape_library_names();

}  // namespace elastica

#endif
