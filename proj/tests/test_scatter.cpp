#include "elastica/scatter.hpp"

#include "elastica/shapes.hpp"
#include "support/mie_series.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>

using namespace elastica;
using namespace elastica::testing;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// closed polygon samples (last vertex repeats the first)
std::vector<Vec2> circle_points(int n, double R = 1.0, Vec2 c = Vec2::Zero()) {
    std::vector<Vec2> v(n + 1);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        v[i] = c + R * Vec2(std::cos(t), std::sin(t));
    }
    v[n] = v[0];
    return v;
}

std::vector<Vec2> kite_points(int n) {
    std::vector<Vec2> v(n + 1);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        v[i] = Vec2(std::cos(t) + 0.65 * std::cos(2 * t) - 0.65, 1.5 * std::sin(t));
    }
    v[n] = v[0];
    return v;
}

double relative_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / b.norm();
}
}  // namespace

TEST_SUITE_BEGIN("scatter");

TEST_CASE("config validation") {
    CHECK_THROWS_AS(ScatterConfig::equidistant(-1.0, 4, 4, 64), std::invalid_argument);
    CHECK_THROWS_AS(ScatterConfig::equidistant(1.0, 4, 4, 63), std::invalid_argument);
    ScatterConfig c = ScatterConfig::equidistant(2.0, 20, 40, 128);
    CHECK(c.eta() == 2.0);
    CHECK(c.data_weight() == doctest::Approx((2 * kPi / 40) * (2 * kPi / 20)));
}

TEST_CASE("trig interpolation reproduces the circle through 4 points") {
    const SmoothBoundary bd = trig_interpolate(circle_points(4), 2);
    for (double s : {0.3, 1.7, 4.4}) {
        CHECK((bd.point(s) - Vec2(std::cos(s), std::sin(s))).norm() < 1e-14);
        CHECK((bd.derivative(s) - Vec2(-std::sin(s), std::cos(s))).norm() < 1e-13);
    }
}

TEST_CASE("trig interpolation of the regular 100-gon stays on the circle") {
    const SmoothBoundary bd = trig_interpolate(circle_points(100), 64);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double s = 2.0 * kPi * i / 500.0;
        worst = std::max(worst, std::abs(bd.point(s).norm() - 1.0));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("trig interpolation rejects bad polygons") {
    auto open_poly = circle_points(10);
    open_poly.back() = Vec2(5.0, 5.0);
    CHECK_THROWS_AS(trig_interpolate(open_poly, 8), std::invalid_argument);

    auto repeated = circle_points(10);
    repeated[4] = repeated[3];
    CHECK_THROWS_AS(trig_interpolate(repeated, 8), std::invalid_argument);
}

TEST_CASE("disc far field matches the separation-of-variables series") {
    const ScatterConfig config = ScatterConfig::equidistant(kPi, 20, 40, 128);
    const SmoothBoundary disc = trig_interpolate(circle_points(64), 64);
    const auto t0 = std::chrono::steady_clock::now();
    const FarField ff = solve_forward(disc, config);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Eigen::MatrixXcd mie =
        mie_far_field(kPi, 1.0, config.measurement_dirs, config.incident_dirs);
    CHECK(relative_error(ff.values, mie) <= 1e-8);
    CHECK(secs < 5.0);
}

TEST_CASE("zero frequency is rejected") {
    ScatterConfig c = ScatterConfig::equidistant(1.0, 4, 4, 64);
    c.k = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("kite self-convergence under quadrature refinement") {
    // the analytic kite is a degree-2 trigonometric curve, so every
    // interpolation below reproduces the same boundary exactly and only the
    // quadrature size changes
    Eigen::MatrixXcd coarse, fine;
    {
        const ScatterConfig c = ScatterConfig::equidistant(kPi, 5, 10, 64);
        coarse = solve_forward(trig_interpolate(kite_points(64), 32), c).values;
    }
    {
        const ScatterConfig c = ScatterConfig::equidistant(kPi, 5, 10, 256);
        fine = solve_forward(trig_interpolate(kite_points(256), 128), c).values;
    }
    CHECK(relative_error(coarse, fine) <= 1e-9);
}

TEST_CASE("superalgebraic convergence on the disc") {
    const ScatterConfig base = ScatterConfig::equidistant(2.0, 4, 8, 32);
    const Eigen::MatrixXcd mie =
        mie_far_field(2.0, 1.0, base.measurement_dirs, base.incident_dirs);
    double prev = 1.0;
    std::vector<double> errs;
    for (int twoN : {32, 64, 128}) {
        ScatterConfig c = base;
        c.nystrom_points = twoN;
        const FarField ff = solve_forward(trig_interpolate(circle_points(twoN / 2), twoN / 2), c);
        errs.push_back(std::max(relative_error(ff.values, mie), 1e-16));
    }
    // each doubling must beat a fixed-order rate by a wide margin
    CHECK(errs[1] <= errs[0] / 50.0 + 1e-15);
    CHECK(errs[2] <= errs[1] / 50.0 + 1e-15);
}

TEST_CASE("far-field reciprocity u(x,d) = u(-d,-x)") {
    const ShapePoint kite = shape_library("kite", {}, 80);
    const int P = 8;
    const ScatterConfig c = ScatterConfig::equidistant(1.5, P, P, 128);
    const FarField ff = far_field_map(kite, c);
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < P; ++j) {
            const int mi = (i + P / 2) % P;  // -x
            const int mj = (j + P / 2) % P;  // -d
            CHECK(std::abs(ff.values(i, j) - ff.values(mj, mi)) <=
                  1e-8 * ff.values.norm() / P);
        }
    }
}

TEST_CASE("rotation equivariance of the far field") {
    const ShapePoint kite = shape_library("kite", {}, 80);
    const double beta = 0.37;
    const double cb = std::cos(beta), sb = std::sin(beta);
    auto rotate = [&](const Vec2& v) { return Vec2(cb * v.x() - sb * v.y(), sb * v.x() + cb * v.y()); };

    const ScatterConfig c = ScatterConfig::equidistant(1.5, 6, 12, 128);
    const FarField base = far_field_map(kite, c);

    // rotate the obstacle and both grids
    ShapePoint rot = kite;
    rot.theta.array() += beta;
    rot.base = rotate(kite.base);
    ScatterConfig cr = c;
    for (auto& d : cr.incident_dirs) d = rotate(d);
    for (auto& d : cr.measurement_dirs) d = rotate(d);
    const FarField rotated = far_field_map(rot, cr);
    CHECK(relative_error(rotated.values, base.values) <= 1e-8);
}

TEST_CASE("amplitude is translation invariant") {
    const ShapePoint kite = shape_library("kite", {}, 80);
    const ScatterConfig c = ScatterConfig::equidistant(kPi, 8, 16, 128);
    const FarField base = far_field_map(kite, c);
    ShapePoint moved = kite;
    moved.base += Vec2(0.31, -0.44);
    const FarField shifted = far_field_map(moved, c);
    CHECK((shifted.values.cwiseAbs() - base.values.cwiseAbs()).cwiseAbs().maxCoeff() <=
          1e-8 * base.values.cwiseAbs().maxCoeff());
}

TEST_CASE("far-field map rejects self-intersecting curves") {
    // exact figure eight through (0,0),(1,1),(1,0),(0,1): edge lengths set
    // the partition, edge directions set the angles
    const std::vector<Vec2> v{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    Eigen::VectorXd tau(5);
    double total = 2.0 * std::sqrt(2.0) + 2.0;
    tau << 0.0, std::sqrt(2.0) / total, (std::sqrt(2.0) + 1.0) / total,
        (2.0 * std::sqrt(2.0) + 1.0) / total, 1.0;
    ShapePoint m;
    m.partition = std::make_shared<Partition>(tau);
    m.theta.resize(4);
    for (int i = 0; i < 4; ++i) {
        const Vec2 e = v[(i + 1) % 4] - v[i];
        m.theta[i] = std::atan2(e.y(), e.x());
    }
    m.length = total;
    m.base = v[0];
    REQUIRE(closure_defect(m).norm() < 1e-14);
    const ScatterConfig c = ScatterConfig::equidistant(1.0, 4, 4, 64);
    CHECK_THROWS_AS(far_field_map(m, c), SelfIntersectionError);
}

TEST_CASE("domain derivative") {
    // the normal derivative of the total field needs noticeably more
    // quadrature than the far field itself once the boundary carries the
    // high interpolation modes of an arclength-sampled polygon
    const ShapePoint kite = shape_library("kite", {}, 48);
    const ScatterConfig c = ScatterConfig::equidistant(kPi, 5, 9, 256);
    ConstraintSolver solver(*kite.partition);

    SUBCASE("zero direction gives zero increment") {
        TangentVector h;
        h.dtheta = Eigen::VectorXd::Zero(48);
        const FarField df = domain_derivative(kite, c, h);
        CHECK(df.values.norm() == 0.0);
    }

    SUBCASE("base-point columns match the analytic translation derivative") {
        const FarField base = far_field_map(kite, c);
        for (int comp = 0; comp < 2; ++comp) {
            TangentVector h;
            h.dtheta = Eigen::VectorXd::Zero(48);
            h.dbase = comp == 0 ? Vec2(1, 0) : Vec2(0, 1);
            const FarField df = domain_derivative(kite, c, h);
            Eigen::MatrixXcd expected(base.values.rows(), base.values.cols());
            for (Eigen::Index r = 0; r < expected.rows(); ++r)
                for (Eigen::Index cc = 0; cc < expected.cols(); ++cc) {
                    const Vec2 diff = c.incident_dirs[cc] - c.measurement_dirs[r];
                    expected(r, cc) = Complex(0.0, c.k * diff[comp]) * base.values(r, cc);
                }
            CHECK(relative_error(df.values, expected) <= 1e-6);
        }
    }

    SUBCASE("tangent directions match feasibility-restored differences") {
        Rng rng(3);
        Eigen::VectorXd raw = Eigen::VectorXd::Zero(51);
        raw.head(48) = rng.vector(48);
        raw[48] = 0.5 * rng.uniform();
        raw[49] = 0.5 * rng.uniform();
        raw[50] = 0.5 * rng.uniform();
        const TangentVector h = TangentVector::from_ambient(solver.project_tangent(kite, raw));

        const FarField df = domain_derivative(kite, c, h);
        const double eps = 1e-5;
        auto at = [&](double t) {
            ShapePoint x = kite;
            x.theta += t * h.dtheta;
            x.length += t * h.dlength;
            x.base += t * h.dbase;
            return far_field_map(restore_feasibility(x, 1e-12, 50), c).values;
        };
        const Eigen::MatrixXcd fd = (at(eps) - at(-eps)) / (2.0 * eps);
        CHECK((df.values - fd).norm() / df.values.norm() <= 1e-4);
    }
}

TEST_CASE("assembled jacobian") {
    const ShapePoint kite = shape_library("kite", {}, 40);
    const ScatterConfig c = ScatterConfig::equidistant(kPi, 4, 6, 96);
    const FarFieldJacobian fj = far_field_with_jacobian(kite, c);

    SUBCASE("columns equal domain_derivative on basis vectors") {
        for (int col : {0, 17, 39, 40, 41, 42}) {
            TangentVector h;
            h.dtheta = Eigen::VectorXd::Zero(40);
            if (col < 40)
                h.dtheta[col] = 1.0;
            else if (col == 40)
                h.dlength = 1.0;
            else
                h.dbase[col - 41] = 1.0;
            const FarField df = domain_derivative(kite, c, h);
            CHECK((fj.jacobian.col(col) - df.stacked()).norm() <= 1e-12 * fj.jacobian.norm());
        }
    }

    SUBCASE("adjoint pairing identity") {
        Rng rng(7);
        for (int rep = 0; rep < 3; ++rep) {
            const Eigen::VectorXd u = rng.vector(43);
            Eigen::VectorXcd w(fj.jacobian.rows());
            for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = Complex(rng.uniform(), rng.uniform());
            const Complex lhs = w.dot(fj.jacobian * u.cast<Complex>());
            const Complex rhs = (fj.jacobian.adjoint() * w).dot(u.cast<Complex>());
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
        }
    }

    SUBCASE("factorization reuse beats per-column re-solves") {
        const auto t0 = std::chrono::steady_clock::now();
        (void)far_field_with_jacobian(kite, c);
        const double reuse = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const auto t1 = std::chrono::steady_clock::now();
        for (int col = 0; col < 43; ++col) {
            TangentVector h;
            h.dtheta = Eigen::VectorXd::Zero(40);
            if (col < 40)
                h.dtheta[col] = 1.0;
            else if (col == 40)
                h.dlength = 1.0;
            else
                h.dbase[col - 41] = 1.0;
            (void)domain_derivative(kite, c, h);
        }
        const double naive = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        CHECK(reuse <= 0.2 * naive);
    }
}

TEST_SUITE_END();
