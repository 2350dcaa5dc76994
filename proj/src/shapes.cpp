#include "elastica/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace elastica {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double get(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Tube of radius rho around an open centerline, closed with semicircular
// end caps; gives genuinely non-star-shaped boundaries (horseshoe, S).
std::function<Vec2(double)> tube_boundary(std::function<Vec2(double)> center, double rho) {
    // centerline parameter in [0,1]; boundary parameter t in [0, 2pi)
    auto tangent = [center](double s) {
        const double h = 1e-6;
        const double a = std::clamp(s - h, 0.0, 1.0);
        const double b = std::clamp(s + h, 0.0, 1.0);
        Vec2 d = (center(b) - center(a)) / (b - a);
        return Vec2(d.normalized());
    };
    return [center, tangent, rho](double t) {
        t = std::fmod(t, 2.0 * kPi);
        if (t < 0) t += 2.0 * kPi;
        const double quarter = kPi / 2.0;
        // quarter arcs of parameter: [0, pi/2) upper offset forward,
        // [pi/2, pi) cap at end, [pi, 3pi/2) lower offset backward,
        // [3pi/2, 2pi) cap at start. Offsets use the left normal.
        if (t < quarter) {
            const double s = t / quarter;
            const Vec2 tg = tangent(s);
            return Vec2(center(s) + rho * Vec2(-tg.y(), tg.x()));
        }
        if (t < 2 * quarter) {
            const double a = (t - quarter) / quarter * kPi;  // 0..pi around the end
            const Vec2 tg = tangent(1.0);
            const Vec2 nl(-tg.y(), tg.x());
            return Vec2(center(1.0) + rho * (std::cos(a) * nl + std::sin(a) * tg));
        }
        if (t < 3 * quarter) {
            const double s = 1.0 - (t - 2 * quarter) / quarter;
            const Vec2 tg = tangent(s);
            return Vec2(center(s) - rho * Vec2(-tg.y(), tg.x()));
        }
        const double a = (t - 3 * quarter) / quarter * kPi;
        const Vec2 tg = tangent(0.0);
        const Vec2 nl(-tg.y(), tg.x());
        return Vec2(center(0.0) + rho * (-std::cos(a) * nl - std::sin(a) * tg));
    };
}

}  // namespace

ShapePoint shape_from_curve(const std::function<Vec2(double)>& curve, int n) {
    // dense arclength table
    const int fine = std::max(4096, 64 * n);
    std::vector<double> s(fine + 1, 0.0);
    std::vector<Vec2> pts(fine + 1);
    for (int i = 0; i <= fine; ++i) pts[i] = curve(2.0 * kPi * i / fine);
    for (int i = 1; i <= fine; ++i) s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
    const double total = s[fine];
    if (!(total > 0.0)) throw std::invalid_argument("shape_from_curve: degenerate curve");

    std::vector<Vec2> v(n);
    int seg = 0;
    for (int i = 0; i < n; ++i) {
        const double target = total * i / n;
        while (seg < fine && s[seg + 1] < target) ++seg;
        const double f = (target - s[seg]) / std::max(s[seg + 1] - s[seg], 1e-300);
        v[i] = pts[seg] + f * (pts[seg + 1] - pts[seg]);
    }

    // counterclockwise orientation via the signed area
    double area = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        area += a.x() * b.y() - b.x() * a.y();
    }
    if (area < 0.0) {
        std::vector<Vec2> w(n);
        w[0] = v[0];
        for (int i = 1; i < n; ++i) w[i] = v[n - i];
        v.swap(w);
    }

    ShapePoint m;
    m.partition = Partition::uniform(n);
    m.theta.resize(n);
    double length = 0.0;
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 e = v[(i + 1) % n] - v[i];
        length += e.norm();
        const double raw = std::atan2(e.y(), e.x());
        if (i == 0) {
            m.theta[0] = raw;
        } else {
            m.theta[i] = prev + wrap_angle(raw - prev);
        }
        prev = m.theta[i];
    }
    m.length = length;
    m.base = v[0];
    return gauge_fix(restore_feasibility(m, 1e-12, 50));
}

ShapePoint shape_library(const std::string& name, const std::map<std::string, double>& params,
                         int n) {
    const double cx = get(params, "center_x", 0.0);
    const double cy = get(params, "center_y", 0.0);
    const Vec2 c(cx, cy);

    std::function<Vec2(double)> curve;
    if (name == "circle") {
        const double R = get(params, "radius", 1.0);
        curve = [c, R](double t) { return Vec2(c + R * Vec2(std::cos(t), std::sin(t))); };
    } else if (name == "ellipse") {
        const double a = get(params, "a", 1.0);
        const double b = get(params, "b", 0.6);
        curve = [c, a, b](double t) { return Vec2(c + Vec2(a * std::cos(t), b * std::sin(t))); };
    } else if (name == "kite") {
        const double scale = get(params, "scale", 1.0);
        curve = [c, scale](double t) {
            return Vec2(c + scale * Vec2(std::cos(t) + 0.65 * std::cos(2 * t) - 0.65,
                                         1.5 * std::sin(t)));
        };
    } else if (name == "three_lobe") {
        const double R = get(params, "radius", 1.0);
        const double a = get(params, "amplitude", 0.3);
        curve = [c, R, a](double t) {
            const double r = R * (1.0 + a * std::cos(3.0 * t));
            return Vec2(c + r * Vec2(std::cos(t), std::sin(t)));
        };
    } else if (name == "peanut") {
        const double R = get(params, "radius", 1.0);
        const double a = get(params, "waist", 0.75);
        curve = [c, R, a](double t) {
            const double r = R * std::sqrt(std::cos(t) * std::cos(t) +
                                           a * a * std::sin(t) * std::sin(t));
            return Vec2(c + r * Vec2(std::cos(t), std::sin(t)));
        };
    } else if (name == "s_shape") {
        // tube radius must stay below the centerline's curvature radius
        // (~1/(amp*pi^2)) or the inner offset develops cusps
        const double half = get(params, "half_width", 1.0);
        const double amp = get(params, "amplitude", 0.4);
        const double rho = get(params, "thickness", 0.16);
        auto center = [c, half, amp](double s) {
            const double x = half * (2.0 * s - 1.0);
            return Vec2(c + Vec2(x, amp * std::sin(kPi * (2.0 * s - 1.0))));
        };
        curve = tube_boundary(center, rho);
    } else if (name == "horseshoe") {
        const double R = get(params, "bend_radius", 0.7);
        const double span = get(params, "span", 4.2);  // radians of arc
        const double rho = get(params, "thickness", 0.25);
        auto center = [c, R, span](double s) {
            const double a = span * (s - 0.5);
            return Vec2(c + R * Vec2(std::cos(a), std::sin(a)));
        };
        curve = tube_boundary(center, rho);
    } else {
        throw std::invalid_argument("unknown shape: " + name);
    }
    return shape_from_curve(curve, n);
}

std::vector<std::string> shape_library_names() {
    return {"circle", "ellipse", "kite", "three_lobe", "peanut", "s_shape", "horseshoe"};
}

}  // namespace elastica
