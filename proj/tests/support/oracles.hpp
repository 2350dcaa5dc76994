#ifndef ELASTICA_TESTS_ORACLES_HPP
#define ELASTICA_TESTS_ORACLES_HPP

#include "elastica/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace elastica::testing {

/// Deterministic uniform samples in [-1, 1].
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return 2.0 * std::uniform_real_distribution<double>(0, 1)(gen_) - 1.0; }
    Eigen::VectorXd vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform();
        return v;
    }

  private:
    std::mt19937_64 gen_;
};

/// Regular n-gon angles (turning number +1) on the uniform partition.
inline ShapePoint regular_ngon(int n, double length = 6.283185307179586,
                               const Vec2& base = Vec2::Zero()) {
    ShapePoint m;
    m.partition = Partition::uniform(n);
    m.theta.resize(n);
    for (int i = 0; i < n; ++i)
        m.theta[i] = 2.0 * 3.141592653589793238462643 * (i + 1) / n + 1.5707963267948966;
    m.length = length;
    m.base = base;
    return m;
}

/// Random feasible shape: perturbed n-gon pushed back onto the manifold.
inline ShapePoint random_feasible(int n, std::uint64_t seed, double amplitude = 0.2) {
    Rng rng(seed);
    ShapePoint m = regular_ngon(n);
    for (int i = 0; i < n; ++i) m.theta[i] += amplitude * rng.uniform();
    return gauge_fix(restore_feasibility(m, 1e-12, 50));
}

/// Central finite difference of a scalar function of theta.
template <typename F>
Eigen::VectorXd fd_gradient_theta(const ShapePoint& m, F&& f, double eps = 1e-6) {
    Eigen::VectorXd g(m.size());
    for (int i = 0; i < m.size(); ++i) {
        ShapePoint p = m, q = m;
        p.theta[i] += eps;
        q.theta[i] -= eps;
        g[i] = (f(p) - f(q)) / (2.0 * eps);
    }
    return g;
}

/// Directed + symmetric Hausdorff distance between polygons, measured with
/// vertex-to-edge distances on subdivided edges.
inline double hausdorff_distance(std::vector<Vec2> a, std::vector<Vec2> b) {
    auto subdivide = [](const std::vector<Vec2>& poly) {
        std::vector<Vec2> out;
        const size_t n = poly.size();
        for (size_t i = 0; i + 1 < n; ++i) {
            for (int s = 0; s < 4; ++s)
                out.push_back(poly[i] + 0.25 * s * (poly[i + 1] - poly[i]));
        }
        out.push_back(poly.back());
        return out;
    };
    auto point_to_segments = [](const Vec2& p, const std::vector<Vec2>& poly) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i + 1 < poly.size(); ++i) {
            const Vec2 d = poly[i + 1] - poly[i];
            const double len2 = d.squaredNorm();
            double t = len2 > 0 ? (p - poly[i]).dot(d) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, (p - (poly[i] + t * d)).norm());
        }
        return best;
    };
    const std::vector<Vec2> fa = subdivide(a), fb = subdivide(b);
    double d = 0.0;
    for (const auto& p : fa) d = std::max(d, point_to_segments(p, b));
    for (const auto& p : fb) d = std::max(d, point_to_segments(p, a));
    return d;
}

}  // namespace elastica::testing

#endif
