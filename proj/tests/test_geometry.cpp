#include "elastica/geometry.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace elastica;
using namespace elastica::testing;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_SUITE_BEGIN("geometry");

TEST_CASE("partition invariants") {
    auto p = Partition::uniform(100);
    CHECK(p->size() == 100);
    CHECK(p->tau()[0] == 0.0);
    CHECK(p->tau()[100] == 1.0);
    CHECK(p->dual_lengths().sum() == doctest::Approx(1.0).epsilon(1e-15));

    // non-uniform partition keeps the telescoping identity
    Eigen::VectorXd tau(7);
    tau << 0.0, 0.07, 0.25, 0.31, 0.6, 0.82, 1.0;
    Partition q(tau);
    CHECK(q.dual_lengths().sum() == doctest::Approx(1.0).epsilon(1e-15));

    Eigen::VectorXd bad(4);
    bad << 0.0, 0.5, 0.4, 1.0;
    CHECK_THROWS_AS(Partition{bad}, std::invalid_argument);
}

TEST_CASE("unit-edge square from four angles") {
    ShapePoint m;
    m.partition = Partition::uniform(4);
    m.theta.resize(4);
    m.theta << kPi / 2, kPi, 3 * kPi / 2, 2 * kPi;
    m.length = 4.0;
    m.base = Vec2(0.0, 0.0);

    const auto v = reconstruct_polygon(m);
    REQUIRE(v.size() == 5);
    CHECK((v[0] - Vec2(0, 0)).norm() < 1e-15);
    CHECK((v[1] - Vec2(0, 1)).norm() < 1e-15);
    CHECK((v[2] - Vec2(-1, 1)).norm() < 1e-15);
    CHECK((v[3] - Vec2(-1, 0)).norm() < 1e-15);
    CHECK((v[4] - v[0]).norm() < 1e-15);
    CHECK(closure_defect(m).norm() < 1e-15);
}

TEST_CASE("constant angles give a straight open segment") {
    ShapePoint m;
    m.partition = Partition::uniform(8);
    m.theta = Eigen::VectorXd::Zero(8);
    m.length = 1.0;
    m.base = Vec2(0.0, 0.0);
    const auto v = reconstruct_polygon(m);
    CHECK((v.back() - Vec2(1.0, 0.0)).norm() < 1e-15);
    const Vec2 d = closure_defect(m);
    CHECK(d.x() == doctest::Approx(1.0));
    CHECK(d.y() == doctest::Approx(0.0));
}

TEST_CASE("regular n-gon closes to roundoff") {
    const ShapePoint m = regular_ngon(100);
    const auto v = reconstruct_polygon(m);
    CHECK((v.back() - v.front()).norm() < 1e-12 * m.length);
    CHECK(closure_defect(m).norm() < 1e-14);
    CHECK(discrete_turning_number(m) == 1);
}

TEST_CASE("closure identity links polygon gap and defect") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        ShapePoint m = regular_ngon(40);
        Rng rng(seed);
        m.theta += 0.3 * rng.vector(40);  // infeasible on purpose
        const auto v = reconstruct_polygon(m);
        const double gap = (v.back() - v.front()).norm();
        CHECK(gap == doctest::Approx(m.length * closure_defect(m).norm()).epsilon(1e-13));
    }
}

TEST_CASE("closure jacobian rows and finite differences") {
    ShapePoint m;
    m.partition = Partition::uniform(6);
    m.theta = Eigen::VectorXd::Zero(6);
    m.length = 1.0;
    auto J = closure_jacobian(m);
    for (int i = 0; i < 6; ++i) {
        CHECK(J(0, i) == doctest::Approx(0.0));
        CHECK(J(1, i) == doctest::Approx(1.0 / 6.0));
    }

    m.theta[0] = kPi / 2;
    J = closure_jacobian(m);
    CHECK(J(0, 0) == doctest::Approx(-1.0 / 6.0));
    CHECK(J(1, 0) == doctest::Approx(0.0).epsilon(1e-15));

    // FD versus analytic rows on random feasible points
    const ShapePoint f = random_feasible(30, 11);
    const auto Jf = closure_jacobian(f);
    const double eps = 1e-6;
    Rng rng(5);
    const Eigen::VectorXd dir = rng.vector(30);
    ShapePoint p = f, q = f;
    p.theta += eps * dir;
    q.theta -= eps * dir;
    const Vec2 fd = (closure_defect(p) - closure_defect(q)) / (2.0 * eps);
    const Vec2 an = Jf * dir;
    CHECK((fd - an).norm() <= 1e-8 * an.norm());

    // single-entry perturbation example recomputed by definition
    ShapePoint g = random_feasible(25, 3);
    ShapePoint g2 = g;
    g2.theta[7] += 0.1;
    const Vec2 expected =
        g.partition->step(7) * Vec2(std::cos(g2.theta[7]) - std::cos(g.theta[7]),
                                    std::sin(g2.theta[7]) - std::sin(g.theta[7]));
    CHECK(((closure_defect(g2) - closure_defect(g)) - expected).norm() < 1e-15);
}

TEST_CASE("h1 gram structure and positivity") {
    auto part = Partition::uniform(4);
    const Eigen::MatrixXd G = h1_gram(*part);
    REQUIRE(G.rows() == 7);
    // stiffness n*(-1,2,-1) cyclic plus mass diag(1/n)
    CHECK(G(0, 0) == doctest::Approx(8.0 + 0.25));
    CHECK(G(0, 1) == doctest::Approx(-4.0));
    CHECK(G(0, 3) == doctest::Approx(-4.0));
    CHECK(G(0, 2) == doctest::Approx(0.0));
    CHECK(G(4, 4) == doctest::Approx(1.0));

    // stiffness-only action annihilates constants
    Eigen::VectorXd c = Eigen::VectorXd::Zero(7);
    c.head(4).setConstant(3.7);
    const Eigen::VectorXd Gc = G * c;
    for (int i = 0; i < 4; ++i) CHECK(Gc[i] == doctest::Approx(3.7 * 0.25));

    // positive definite for random valid partitions
    Rng rng(17);
    for (int rep = 0; rep < 4; ++rep) {
        Eigen::VectorXd tau(11);
        tau[0] = 0.0;
        for (int i = 1; i < 10; ++i) tau[i] = tau[i - 1] + 0.02 + 0.1 * std::abs(rng.uniform());
        tau[10] = tau[9] + 0.05;
        tau /= tau[10];
        tau[10] = 1.0;
        Partition p(tau);
        const Eigen::MatrixXd Gp = h1_gram(p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gp);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK((Gp - Gp.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("pseudo-inverse solves the constraint with minimal norm") {
    const ShapePoint m = random_feasible(24, 4);
    ConstraintSolver solver(*m.partition);

    CHECK(solver.pseudo_inverse(m, Vec2(0, 0)).ambient().norm() == 0.0);

    Rng rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        const Vec2 v(rng.uniform(), rng.uniform());
        const TangentVector u = solver.pseudo_inverse(m, v);
        CHECK((closure_jacobian(m) * u.dtheta - v).norm() < 1e-10);
        CHECK(u.dlength == 0.0);
        CHECK(u.dbase.norm() == 0.0);

        // minimality against a dense KKT oracle
        const int n = m.size();
        const Eigen::MatrixXd G = solver.gram();
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 5, n + 5);
        K.topLeftCorner(n + 3, n + 3) = G;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, n + 3);
        A.leftCols(n) = closure_jacobian(m);
        K.block(n + 3, 0, 2, n + 3) = A;
        K.block(0, n + 3, n + 3, 2) = A.transpose();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 5);
        rhs.tail<2>() = v;
        const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
        CHECK((sol.head(n + 3) - u.ambient()).norm() < 1e-9 * (1.0 + sol.norm()));
    }

    // projection P = DPhi^+ DPhi is idempotent
    const int n = m.size();
    Eigen::MatrixXd P(n + 3, n + 3);
    for (int i = 0; i < n + 3; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 3);
        e[i] = 1.0;
        Eigen::Matrix2Xd Jth = closure_jacobian(m);
        const Vec2 Ae = i < n ? Vec2(Jth.col(i)) : Vec2::Zero();
        P.col(i) = solver.pseudo_inverse(m, Ae).ambient();
    }
    CHECK((P * P - P).norm() <= 1e-9);
}

TEST_CASE("degenerate constant angles are rank deficient") {
    ShapePoint m;
    m.partition = Partition::uniform(12);
    m.theta = Eigen::VectorXd::Constant(12, 0.4);
    m.length = 1.0;
    ConstraintSolver solver(*m.partition);
    CHECK_THROWS_AS(solver.pseudo_inverse(m, Vec2(1, 0)), RankDeficiencyError);
    CHECK_THROWS_AS(restore_feasibility(m), RankDeficiencyError);
}

TEST_CASE("feasibility restoration converges quadratically") {
    const ShapePoint clean = regular_ngon(100);
    SUBCASE("feasible input returns unchanged") {
        const ShapePoint r = restore_feasibility(clean);
        CHECK((r.theta - clean.theta).norm() == 0.0);
    }
    SUBCASE("perturbations of amplitude 0.05 restore within 8 iterations") {
        for (std::uint64_t seed : {1ull, 5ull, 23ull}) {
            Rng rng(seed);
            ShapePoint m = clean;
            m.theta += 0.05 * rng.vector(100);

            // track the defect decay by running the iteration manually
            ConstraintSolver solver(*m.partition);
            std::vector<double> defects{closure_defect(m).norm()};
            ShapePoint x = m;
            int iters = 0;
            while (defects.back() > 1e-12 && iters < 8) {
                const TangentVector u = solver.pseudo_inverse(x, closure_defect(x));
                x.theta -= u.dtheta;
                defects.push_back(closure_defect(x).norm());
                ++iters;
            }
            CHECK(defects.back() <= 1e-12);
            CHECK(iters <= 8);
            // quadratic decay on the way down
            for (size_t i = 1; i + 1 < defects.size(); ++i) {
                if (defects[i] > 1e-14)
                    CHECK(defects[i + 1] <= 50.0 * defects[i] * defects[i]);
            }
        }
    }
    SUBCASE("box clamping applies after restoration") {
        Rng rng(2);
        ShapePoint m = clean;
        m.theta += 0.05 * rng.vector(100);
        m.length = 10.0;
        BoxConstraints box;
        box.length_min = 1.0;
        box.length_max = 7.0;
        const ShapePoint r = restore_feasibility(m, 1e-10, 20, box);
        CHECK(r.length == 7.0);
        CHECK(closure_defect(r).norm() <= 1e-10);
    }
}

TEST_CASE("gauge shift by 2 pi changes nothing observable") {
    const ShapePoint m = random_feasible(30, 8);
    ShapePoint shifted = m;
    shifted.theta.array() += 2.0 * kPi;

    CHECK((closure_defect(m) - closure_defect(shifted)).norm() < 1e-14);
    CHECK((turning_angles(m) - turning_angles(shifted)).norm() < 1e-13);
    const auto va = reconstruct_polygon(m);
    const auto vb = reconstruct_polygon(shifted);
    double dmax = 0.0;
    for (size_t i = 0; i < va.size(); ++i) dmax = std::max(dmax, (va[i] - vb[i]).norm());
    CHECK(dmax < 1e-13);

    const ShapePoint g = gauge_fix(shifted);
    CHECK(g.theta[0] > -kPi);
    CHECK(g.theta[0] <= kPi);
}

TEST_CASE("simplicity checker") {
    CHECK(is_simple({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK_FALSE(is_simple({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));  // figure eight
    CHECK(is_simple(reconstruct_polygon(random_feasible(60, 21, 0.1))));
    CHECK_THROWS_AS(is_simple({{0, 0}, {1, 0}}), std::invalid_argument);
}

TEST_SUITE_END();
