#include "elastica/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elastica {

namespace {

struct Frame {
    double xmin, xmax, ymin, ymax;
    int px;

    static Frame fit(const std::vector<SvgCurve>& curves, int px) {
        Frame f{-1.0, 1.0, -1.0, 1.0, px};
        bool first = true;
        for (const auto& c : curves)
            for (const auto& p : c.points) {
                if (first) {
                    f.xmin = f.xmax = p.x();
                    f.ymin = f.ymax = p.y();
                    first = false;
                } else {
                    f.xmin = std::min(f.xmin, p.x());
                    f.xmax = std::max(f.xmax, p.x());
                    f.ymin = std::min(f.ymin, p.y());
                    f.ymax = std::max(f.ymax, p.y());
                }
            }
        const double mx = 0.08 * std::max(f.xmax - f.xmin, 1e-12);
        const double my = 0.08 * std::max(f.ymax - f.ymin, 1e-12);
        const double m = std::max(mx, my);
        f.xmin -= m;
        f.xmax += m;
        f.ymin -= m;
        f.ymax += m;
        const double span = std::max(f.xmax - f.xmin, f.ymax - f.ymin);
        const double cx = 0.5 * (f.xmin + f.xmax), cy = 0.5 * (f.ymin + f.ymax);
        f.xmin = cx - span / 2;
        f.xmax = cx + span / 2;
        f.ymin = cy - span / 2;
        f.ymax = cy + span / 2;
        return f;
    }

    double sx(double x) const { return (x - xmin) / (xmax - xmin) * px; }
    double sy(double y) const { return (ymax - y) / (ymax - ymin) * px; }
};

void emit_path(std::ostringstream& os, const SvgCurve& c, const Frame& f) {
    if (c.points.size() < 2) return;
    os << "<path d=\"";
    for (size_t i = 0; i < c.points.size(); ++i) {
        os << (i == 0 ? "M" : "L") << f.sx(c.points[i].x()) << " " << f.sy(c.points[i].y());
    }
    os << "\" fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"" << c.width << "\"";
    if (!c.dash.empty()) os << " stroke-dasharray=\"" << c.dash << "\"";
    os << "/>\n";
}

// blue -> white -> red colormap on [0,1]
std::string colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        const double u = t / 0.5;
        r = static_cast<int>(32 + u * (255 - 32));
        g = static_cast<int>(64 + u * (255 - 64));
        b = 255;
    } else {
        const double u = (t - 0.5) / 0.5;
        r = 255;
        g = static_cast<int>(255 - u * (255 - 48));
        b = static_cast<int>(255 - u * (255 - 32));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string svg_overlay(const std::vector<SvgCurve>& curves, int size_px) {
    const Frame f = Frame::fit(curves, size_px);
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
       << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& c : curves) emit_path(os, c, f);
    os << "</svg>\n";
    return os.str();
}

std::string svg_heatmap(const IndicatorField& field, const std::vector<SvgCurve>& curves,
                        int size_px) {
    std::ostringstream os;
    os.precision(6);
    const int res = field.resolution;
    const double lo = field.inv_chi.minCoeff();
    const double hi = field.inv_chi.maxCoeff();
    const double cell = static_cast<double>(size_px) / res;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
       << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            const double t = (field.inv_chi(ix, iy) - lo) / std::max(hi - lo, 1e-300);
            // x to the right, y upward
            os << "<rect x=\"" << ix * cell << "\" y=\"" << (res - 1 - iy) * cell
               << "\" width=\"" << cell + 0.5 << "\" height=\"" << cell + 0.5 << "\" fill=\""
               << colormap(t) << "\"/>\n";
        }
    }
    // curve overlay in box coordinates
    Frame f{field.box.xmin, field.box.xmax, field.box.ymin, field.box.ymax, size_px};
    for (const auto& c : curves) emit_path(os, c, f);
    os << "</svg>\n";
    return os.str();
}

}  // namespace elastica
