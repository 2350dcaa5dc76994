#include "elastica/optimize.hpp"

#include "elastica/shapes.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace elastica;
using namespace elastica::testing;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::VectorXd ambient(const ShapePoint& m) {
    Eigen::VectorXd v(m.size() + 3);
    v.head(m.size()) = m.theta;
    v[m.size()] = m.length;
    v[m.size() + 1] = m.base.x();
    v[m.size() + 2] = m.base.y();
    return v;
}

/// Synthetic affine data operator F(m) = A * (theta, L, p) - no curve
/// geometry involved; keeps optimizer tests fast and transparent.
class LinearOperator final : public ForwardOperator {
  public:
    LinearOperator(Eigen::MatrixXcd A, double weight) : A_(std::move(A)), weight_(weight) {}
    Eigen::Index dim() const override { return A_.rows(); }
    double weight() const override { return weight_; }
    Eigen::VectorXcd apply(const ShapePoint& m) const override {
        return A_ * ambient(m).cast<Complex>();
    }
    std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> apply_with_jacobian(
        const ShapePoint& m) const override {
        return {apply(m), A_};
    }

  private:
    Eigen::MatrixXcd A_;
    double weight_;
};

Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXcd A(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) A(r, c) = Complex(rng.uniform(), rng.uniform());
    return A;
}

TikhonovProblem make_problem(const ForwardOperator& op, const Eigen::VectorXcd& data,
                             const ShapePoint& rest, double delta = 0.0) {
    TikhonovProblem p;
    p.forward = &op;
    p.data = data;
    p.noise_level = delta;
    p.rest = rest;
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("optimize");

TEST_CASE("objective bookkeeping") {
    const ShapePoint m = random_feasible(12, 2);
    LinearOperator op(random_matrix(8, 15, 1), 0.25);
    const Eigen::VectorXcd y = op.apply(m);
    TikhonovProblem problem = make_problem(op, y, m);

    CHECK(objective(problem, m, 0.0) == doctest::Approx(0.0));   // data fits, penalty at rest
    CHECK(objective(problem, m, 10.0) == doctest::Approx(0.0));  // m = rest

    const ShapePoint other = random_feasible(12, 3);
    const double r = residual_norm(problem, op.apply(other));
    CHECK(objective(problem, other, 0.0) == doctest::Approx(0.5 * r * r));
    CHECK(objective(problem, other, 2.0) ==
          doctest::Approx(0.5 * r * r + 2.0 * penalty_value(problem, other)));
}

TEST_CASE("objective on self-intersecting curves") {
    // exact figure eight through (0,0),(1,1),(1,0),(0,1)
    const std::vector<Vec2> v{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    const double total = 2.0 * std::sqrt(2.0) + 2.0;
    Eigen::VectorXd tau(5);
    tau << 0.0, std::sqrt(2.0) / total, (std::sqrt(2.0) + 1.0) / total,
        (2.0 * std::sqrt(2.0) + 1.0) / total, 1.0;
    ShapePoint eight;
    eight.partition = std::make_shared<Partition>(tau);
    eight.theta.resize(4);
    for (int i = 0; i < 4; ++i) {
        const Vec2 e = v[(i + 1) % 4] - v[i];
        eight.theta[i] = std::atan2(e.y(), e.x());
    }
    eight.length = total;
    eight.base = v[0];

    const ScatterConfig sc = ScatterConfig::equidistant(1.0, 4, 4, 64);
    ScatterOperator op(sc);
    TikhonovProblem problem;
    problem.forward = &op;
    problem.data = Eigen::VectorXcd::Zero(16);
    problem.rest = eight;

    SUBCASE("bending penalty: the forward map is undefined") {
        problem.penalty = Penalty::kBending;
        CHECK_THROWS_AS(objective(problem, eight, 1.0), SelfIntersectionError);
    }
    SUBCASE("moebius penalty acts as a barrier") {
        problem.penalty = Penalty::kBendingPlusMobius;
        CHECK(std::isinf(objective(problem, eight, 1.0)));
    }
}

TEST_CASE("gauss-newton step solves the linearized KKT system") {
    const int n = 10;
    const ShapePoint m = random_feasible(n, 4);
    ConstraintSolver solver(*m.partition);
    LinearOperator op(random_matrix(9, n + 3, 2), 0.5);
    const ShapePoint target = random_feasible(n, 5);
    TikhonovProblem problem = make_problem(op, op.apply(target), m);
    SolverSettings settings;

    const double alpha = 0.37;
    const GaussNewtonStep step = gauss_newton_step(problem, m, alpha, settings, solver);
    const Eigen::VectorXd u = step.direction.ambient();

    // reassemble the blocks and check the first-order KKT residual
    const Eigen::VectorXcd r = op.apply(m) - problem.data;
    auto [value, J] = op.apply_with_jacobian(m);
    const EnergyReport pen = bending_energy(m, &problem.rest);
    const Eigen::VectorXd grad = 0.5 * (J.adjoint() * r).real() + alpha * pen.gradient;
    Eigen::MatrixXd H = 0.5 * (J.adjoint() * J).real();
    H.topLeftCorner(n, n) +=
        alpha * intrinsic_hessian(m, pen.gradient.head(n), pen.hessian, solver);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, n + 3);
    A.leftCols(n) = closure_jacobian(m);

    const Eigen::VectorXd kkt1 = H * u + A.transpose() * step.multiplier + grad;
    CHECK(kkt1.norm() <= 1e-10 * std::max(1.0, grad.norm()));
    CHECK((A * u).norm() <= 1e-10);

    // tangency of the direction
    CHECK((closure_jacobian(m) * step.direction.dtheta).norm() <= 1e-10);
}

TEST_CASE("stationary point produces a vanishing step") {
    const ShapePoint m = random_feasible(14, 6);
    ConstraintSolver solver(*m.partition);
    LinearOperator op(random_matrix(10, 17, 3), 1.0);
    TikhonovProblem problem = make_problem(op, op.apply(m), m);
    SolverSettings settings;
    const GaussNewtonStep step = gauss_newton_step(problem, m, 1.0, settings, solver);
    CHECK(step.direction.ambient().norm() <= 1e-9);
    CHECK(step.gradient_norm_dual <= 1e-9);
}

TEST_CASE("gradient-metric directions always descend") {
    SolverSettings settings;
    settings.hessian_mode = HessianMode::kGradientMetric;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 12;
        const ShapePoint m = random_feasible(n, seed);
        ConstraintSolver solver(*m.partition);
        LinearOperator op(random_matrix(9, n + 3, seed + 100), 1.0);
        const ShapePoint target = random_feasible(n, seed + 200);
        TikhonovProblem problem = make_problem(op, op.apply(target), m);

        const double alpha = 0.1;
        const GaussNewtonStep step = gauss_newton_step(problem, m, alpha, settings, solver);
        const Eigen::VectorXd u = step.direction.ambient();
        if (u.norm() == 0.0) continue;

        auto [value, J] = op.apply_with_jacobian(m);
        const EnergyReport pen = bending_energy(m, &problem.rest);
        const Eigen::VectorXd grad =
            (J.adjoint() * (value - problem.data)).real() + alpha * pen.gradient;
        CHECK(grad.dot(u) < 0.0);
    }
}

TEST_CASE("line search") {
    const int n = 16;
    const ShapePoint m = random_feasible(n, 8);
    ConstraintSolver solver(*m.partition);
    LinearOperator op(random_matrix(12, n + 3, 9), 1.0);
    const ShapePoint target = random_feasible(n, 10);
    TikhonovProblem problem = make_problem(op, op.apply(target), m);
    SolverSettings settings;

    SUBCASE("zero direction returns the point unchanged") {
        TangentVector u;
        u.dtheta = Eigen::VectorXd::Zero(n);
        const ShapePoint r = line_search_and_restore(problem, m, 1.0, u, settings, solver);
        CHECK((r.theta - m.theta).norm() == 0.0);
    }

    SUBCASE("well-scaled quadratic step is accepted at t = 1") {
        IterationRecord rec;
        const GaussNewtonStep step = gauss_newton_step(problem, m, 1e-6, settings, solver);
        const ShapePoint r = line_search_and_restore(problem, m, 1e-6, step.direction, settings,
                                                     solver, &rec);
        CHECK(rec.accepted);
        CHECK(rec.step_size == 1.0);
        CHECK(objective(problem, r, 1e-6) < objective(problem, m, 1e-6));
    }

    SUBCASE("steps crossing into self-intersection are halved until simple") {
        // dumbbell-ish start plus a pinch direction; amplify until the full
        // step would self-intersect after restoration
        const ShapePoint dumbbell = shape_library("peanut", {{"waist", 0.45}}, 40);
        ConstraintSolver ds(*dumbbell.partition);
        LinearOperator zero_op(Eigen::MatrixXcd::Zero(1, 43), 1.0);
        ShapePoint pinched = dumbbell;
        for (int i = 0; i < 40; ++i) {
            const double t = 2.0 * kPi * i / 40.0;
            pinched.theta[i] += 1.2 * std::sin(2.0 * t);
        }
        TikhonovProblem zp = make_problem(zero_op, Eigen::VectorXcd::Zero(1), pinched);

        // descent direction of the bending penalty toward the pinched rest
        const EnergyReport pen = bending_energy(dumbbell, &zp.rest);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(43);
        g = -pen.gradient;
        TangentVector u = TangentVector::from_ambient(ds.project_tangent(dumbbell, g));

        double scale = 0.05;
        bool crosses = false;
        for (int tries = 0; tries < 14 && !crosses; ++tries) {
            scale *= 2.0;
            ShapePoint trial = dumbbell;
            trial.theta += scale * u.dtheta;
            try {
                trial = restore_feasibility(trial, ds, 1e-10, 20);
                crosses = !is_simple(reconstruct_polygon(trial));
            } catch (const std::exception&) {
                crosses = true;  // unrestorable full step also forces backtracking
            }
        }
        REQUIRE(crosses);
        TangentVector scaled;
        scaled.dtheta = scale * u.dtheta;
        scaled.dlength = scale * u.dlength;
        scaled.dbase = scale * u.dbase;

        IterationRecord rec;
        const ShapePoint res =
            line_search_and_restore(zp, dumbbell, 1.0, scaled, settings, ds, &rec);
        CHECK(rec.accepted);
        CHECK(rec.step_size < 1.0);
        CHECK(is_simple(reconstruct_polygon(res)));
    }
}

TEST_CASE("minimize_at_alpha stopping behavior") {
    const int n = 12;
    const ShapePoint m = random_feasible(n, 11);
    LinearOperator op(random_matrix(9, n + 3, 12), 1.0);
    TikhonovProblem problem = make_problem(op, op.apply(m), m);
    SolverSettings settings;

    SUBCASE("stationary start converges immediately") {
        const MinimizeResult res = minimize_at_alpha(problem, m, 1.0, settings);
        CHECK(res.status == MinimizeStatus::kConverged);
        CHECK(res.iterations == 0);
    }
    SUBCASE("zero iteration budget returns the start flagged") {
        settings.max_gn_iters = 0;
        const ShapePoint other = random_feasible(n, 13);
        const MinimizeResult res = minimize_at_alpha(problem, other, 1.0, settings);
        CHECK(res.status == MinimizeStatus::kMaxIterations);
        CHECK((res.shape.theta - other.theta).norm() == 0.0);
    }
    SUBCASE("descends on a synthetic target") {
        const ShapePoint start = random_feasible(n, 14);
        RunTrace trace;
        const MinimizeResult res = minimize_at_alpha(problem, start, 1e-8, settings, &trace);
        CHECK(res.residual_norm < residual_norm(problem, op.apply(start)));
        // Armijo guarantees a nonincreasing objective along accepted steps
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& it : trace.iterations) {
            if (!it.accepted) continue;
            CHECK(it.objective <= prev + 1e-14);
            prev = it.objective;
        }
    }
}

TEST_CASE("discrepancy continuation edge cases") {
    const int n = 12;
    const ShapePoint m0 = random_feasible(n, 15);
    LinearOperator op(random_matrix(9, n + 3, 16), 1.0);
    const ShapePoint target = random_feasible(n, 17);
    SolverSettings settings;

    SUBCASE("huge delta terminates at the initial guess") {
        TikhonovProblem problem = make_problem(op, op.apply(target), m0);
        problem.noise_level = 100.0 * residual_norm(problem, op.apply(m0));
        const ContinuationResult res = discrepancy_continuation(problem, m0, settings);
        CHECK(res.status == ContinuationStatus::kDiscrepancyReached);
        CHECK(res.trace.stages.size() == 1);
        // the huge alpha pins the penalized theta modes; only the
        // energy-free directions (rotation, L, p) may drift a little
        CHECK(res.trace.stages.front().iterations <= 2);
        CHECK((res.shape.theta - m0.theta).norm() <= 0.5);
    }
    SUBCASE("zero delta runs to the alpha floor and is flagged") {
        TikhonovProblem problem = make_problem(op, op.apply(target), m0);
        problem.noise_level = 0.0;
        settings.alpha_floor_factor = 1e-6;  // keep the loop short
        settings.max_gn_iters = 5;
        const ContinuationResult res = discrepancy_continuation(problem, m0, settings);
        CHECK(res.status == ContinuationStatus::kAlphaFloor);
    }
}

TEST_CASE("gauge-shifted input produces the gauge-fixed iterates") {
    // 2 pi shifts of theta feed through cos/sin only; after the first
    // restoration the gauge fix maps both runs onto the same representative
    const int n = 20;
    const ShapePoint m0 = random_feasible(n, 18);
    const ScatterConfig sc = ScatterConfig::equidistant(2.0, 3, 6, 64);
    ScatterOperator op(sc);
    const ShapePoint truth = random_feasible(n, 19, 0.1);
    TikhonovProblem problem = make_problem(op, op.apply(truth), m0);
    problem.noise_level = 0.05 * residual_norm(problem, op.apply(m0));
    SolverSettings settings;
    settings.max_gn_iters = 3;

    TikhonovProblem shifted = problem;
    ShapePoint m0s = m0;
    m0s.theta.array() += 2.0 * kPi;
    shifted.rest.theta.array() += 2.0 * kPi;

    const MinimizeResult a = minimize_at_alpha(problem, m0, 0.05, settings);
    const MinimizeResult b = minimize_at_alpha(shifted, m0s, 0.05, settings);
    const ShapePoint ga = gauge_fix(a.shape);
    const ShapePoint gb = gauge_fix(b.shape);
    CHECK((ga.theta - gb.theta).norm() <= 1e-9);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("add_noise contracts") {
    Rng rng(20);
    Eigen::VectorXcd y(40);
    for (int i = 0; i < 40; ++i) y[i] = Complex(rng.uniform(), rng.uniform());
    const double w = 0.31;

    SUBCASE("zero level is the identity") {
        auto [noisy, delta] = add_noise(y, w, 0.0, 7);
        CHECK(delta == 0.0);
        CHECK((noisy - y).norm() == 0.0);
    }
    SUBCASE("relative level is exact") {
        auto [noisy, delta] = add_noise(y, w, 0.05, 7);
        const double rel = (noisy - y).norm() / y.norm();
        CHECK(std::abs(rel - 0.05) <= 1e-14);
        CHECK(delta == doctest::Approx(0.05 * std::sqrt(w) * y.norm()).epsilon(1e-14));
    }
    SUBCASE("seeding is deterministic and seed-sensitive") {
        auto [a, d1] = add_noise(y, w, 0.05, 123);
        auto [b, d2] = add_noise(y, w, 0.05, 123);
        auto [c, d3] = add_noise(y, w, 0.05, 124);
        CHECK((a - b).norm() == 0.0);
        CHECK((a - c).norm() > 0.0);
    }
}

TEST_SUITE_END();
