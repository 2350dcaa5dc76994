#ifndef ELASTICA_SVG_HPP
#define ELASTICA_SVG_HPP

#include "elastica/geometry.hpp"
#include "elastica/sampling.hpp"

#include <string>
#include <vector>

namespace elastica {

struct SvgCurve {
    std::vector<Vec2> points;
    std::string color = "#2060c0";
    std::string dash;  // "" solid, e.g. "6,4" dashed, "2,4" dotted
    double width = 2.0;
};

/// Overlay plot of closed curves on a common frame (truth dotted, initial
/// guess dashed, reconstruction solid by convention of the callers).
std::string svg_overlay(const std::vector<SvgCurve>& curves, int size_px = 640);

/// Heatmap of 1/chi with optional overlaid curves.
std::string svg_heatmap(const IndicatorField& field, const std::vector<SvgCurve>& curves,
                        int size_px = 640);

}  // namespace elastica

#endif
