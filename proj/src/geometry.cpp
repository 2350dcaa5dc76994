#include "elastica/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace elastica {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

Partition::Partition(Eigen::VectorXd tau) : tau_(std::move(tau)) {
    const int n = static_cast<int>(tau_.size()) - 1;
    if (n < 3) throw std::invalid_argument("partition needs at least 3 subintervals");
    if (tau_[0] != 0.0 || tau_[n] != 1.0)
        throw std::invalid_argument("partition must start at 0 and end at 1");
    for (int i = 0; i < n; ++i)
        if (!(tau_[i] < tau_[i + 1]))
            throw std::invalid_argument("partition must be strictly increasing");
    dual_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double right = (i + 2 <= n) ? tau_[i + 2] : 1.0 + tau_[1];
        dual_[i] = 0.5 * (right - tau_[i]);
    }
}

std::shared_ptr<const Partition> Partition::uniform(int n) {
    Eigen::VectorXd tau = Eigen::VectorXd::LinSpaced(n + 1, 0.0, 1.0);
    tau[0] = 0.0;
    tau[n] = 1.0;
    return std::make_shared<Partition>(std::move(tau));
}

bool Partition::same_as(const Partition& other) const {
    return this == &other || (tau_.size() == other.tau_.size() && tau_ == other.tau_);
}

Eigen::VectorXd TangentVector::ambient() const {
    Eigen::VectorXd v(dtheta.size() + 3);
    v.head(dtheta.size()) = dtheta;
    v[dtheta.size()] = dlength;
    v[dtheta.size() + 1] = dbase[0];
    v[dtheta.size() + 2] = dbase[1];
    return v;
}

TangentVector TangentVector::from_ambient(const Eigen::VectorXd& v) {
    TangentVector t;
    const auto n = v.size() - 3;
    t.dtheta = v.head(n);
    t.dlength = v[n];
    t.dbase = Vec2(v[n + 1], v[n + 2]);
    return t;
}

void BoxConstraints::clamp(ShapePoint& m) const {
    m.length = std::clamp(m.length, length_min, length_max);
    m.base[0] = std::clamp(m.base[0], base_lo[0], base_hi[0]);
    m.base[1] = std::clamp(m.base[1], base_lo[1], base_hi[1]);
}

double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * kPi);
    if (y <= -kPi) y = kPi;  // remainder returns [-pi, pi]; fold the tie
    return y;
}

Eigen::VectorXd turning_angles(const ShapePoint& m) {
    const int n = m.size();
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = wrap_angle(m.theta[(i + 1) % n] - m.theta[i]);
    return t;
}

int discrete_turning_number(const ShapePoint& m) {
    return static_cast<int>(std::lround(turning_angles(m).sum() / (2.0 * kPi)));
}

std::vector<Vec2> reconstruct_polygon(const ShapePoint& m) {
    const int n = m.size();
    std::vector<Vec2> v(n + 1);
    v[0] = m.base;
    for (int i = 0; i < n; ++i) {
        const double w = m.length * m.partition->step(i);
        v[i + 1] = v[i] + w * Vec2(std::cos(m.theta[i]), std::sin(m.theta[i]));
    }
    return v;
}

Vec2 closure_defect(const ShapePoint& m) {
    const int n = m.size();
    Vec2 d = Vec2::Zero();
    for (int i = 0; i < n; ++i)
        d += m.partition->step(i) * Vec2(std::cos(m.theta[i]), std::sin(m.theta[i]));
    return d;
}

Eigen::Matrix2Xd closure_jacobian(const ShapePoint& m) {
    const int n = m.size();
    Eigen::Matrix2Xd J(2, n);
    for (int i = 0; i < n; ++i) {
        const double w = m.partition->step(i);
        J(0, i) = -w * std::sin(m.theta[i]);
        J(1, i) = w * std::cos(m.theta[i]);
    }
    return J;
}

Eigen::MatrixXd h1_gram(const Partition& partition) {
    const int n = partition.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 3, n + 3);
    for (int i = 0; i < n; ++i) G(i, i) += partition.dual_lengths()[i];
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double w = 1.0 / partition.step((i + 1) % n);
        G(i, i) += w;
        G(j, j) += w;
        G(i, j) -= w;
        G(j, i) -= w;
    }
    G(n, n) = G(n + 1, n + 1) = G(n + 2, n + 2) = 1.0;
    return G;
}

ConstraintSolver::ConstraintSolver(const Partition& partition)
    : gram_(h1_gram(partition)), n_(partition.size()) {
    llt_.compute(gram_);
    if (llt_.info() != Eigen::Success)
        throw std::runtime_error("H1 Gram matrix factorization failed");
}

Eigen::VectorXd ConstraintSolver::gram_solve(const Eigen::VectorXd& v) const {
    return llt_.solve(v);
}

Eigen::Matrix2d ConstraintSolver::schur(const ShapePoint& m, Eigen::MatrixXd& GiAt) const {
    const Eigen::Matrix2Xd Jth = closure_jacobian(m);
    Eigen::MatrixXd At = Eigen::MatrixXd::Zero(n_ + 3, 2);
    At.topRows(n_) = Jth.transpose();
    GiAt = llt_.solve(At);
    Eigen::Matrix2d S = At.transpose() * GiAt;
    // rank check via the 2x2 eigenvalues
    const double tr = S.trace();
    const double det = S.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lmin = tr / 2.0 - disc;
    const double lmax = tr / 2.0 + disc;
    if (!(lmin > 0.0) || lmax / lmin > 1e12)
        throw RankDeficiencyError("closure constraint Jacobian is rank deficient");
    return S;
}

TangentVector ConstraintSolver::pseudo_inverse(const ShapePoint& m, const Vec2& v) const {
    Eigen::MatrixXd GiAt;
    const Eigen::Matrix2d S = schur(m, GiAt);
    const Vec2 mu = S.ldlt().solve(v);
    return TangentVector::from_ambient(GiAt * mu);
}

Vec2 ConstraintSolver::dual_multiplier(const ShapePoint& m, const Eigen::VectorXd& g) const {
    Eigen::MatrixXd GiAt;
    const Eigen::Matrix2d S = schur(m, GiAt);
    const Vec2 rhs = GiAt.transpose() * g;  // A G^{-1} g
    return S.ldlt().solve(rhs);
}

Eigen::VectorXd ConstraintSolver::project_tangent(const ShapePoint& m,
                                                  const Eigen::VectorXd& v) const {
    Eigen::MatrixXd GiAt;
    const Eigen::Matrix2d S = schur(m, GiAt);
    Eigen::Matrix2Xd Jth = closure_jacobian(m);
    Vec2 Av = Jth * v.head(n_);
    const Vec2 mu = S.ldlt().solve(Av);
    return v - GiAt * mu;
}

Eigen::VectorXd ConstraintSolver::riesz_tangent(const ShapePoint& m,
                                                const Eigen::VectorXd& g) const {
    Eigen::MatrixXd GiAt;
    const Eigen::Matrix2d S = schur(m, GiAt);
    const Vec2 xi = S.ldlt().solve(GiAt.transpose() * g);
    Eigen::MatrixXd At = Eigen::MatrixXd::Zero(n_ + 3, 2);
    At.topRows(n_) = closure_jacobian(m).transpose();
    return llt_.solve(g - At * xi);
}

double ConstraintSolver::norm(const Eigen::VectorXd& v) const {
    return std::sqrt(std::max(0.0, v.dot(gram_ * v)));
}

TangentVector apply_pseudo_inverse(const ShapePoint& m, const Vec2& v) {
    ConstraintSolver solver(*m.partition);
    return solver.pseudo_inverse(m, v);
}

ShapePoint restore_feasibility(const ShapePoint& x0, double tol, int max_iter,
                               const BoxConstraints& box) {
    ConstraintSolver solver(*x0.partition);
    return restore_feasibility(x0, solver, tol, max_iter, box);
}

ShapePoint restore_feasibility(const ShapePoint& x0, const ConstraintSolver& solver, double tol,
                               int max_iter, const BoxConstraints& box) {
    ShapePoint x = x0;
    double defect = closure_defect(x).norm();
    if (defect <= tol) return x;
    for (int it = 0; it < max_iter; ++it) {
        const TangentVector u = solver.pseudo_inverse(x, closure_defect(x));
        x.theta -= u.dtheta;
        defect = closure_defect(x).norm();
        if (defect <= tol) {
            box.clamp(x);
            return gauge_fix(std::move(x));
        }
    }
    throw RestoreError("feasibility restoration did not converge", defect);
}

ShapePoint gauge_fix(ShapePoint m) {
    const double shift = m.theta[0] - wrap_angle(m.theta[0]);
    if (shift != 0.0) m.theta.array() -= shift;
    return m;
}

namespace {

// Orientation predicate; 0 on (near-)collinear configurations.
int orient(const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
    const double v = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double eps) {
    return p.x() <= std::max(a.x(), b.x()) + eps && p.x() >= std::min(a.x(), b.x()) - eps &&
           p.y() <= std::max(a.y(), b.y()) + eps && p.y() >= std::min(a.y(), b.y()) - eps;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
    const int o1 = orient(a, b, c, eps);
    const int o2 = orient(a, b, d, eps);
    const int o3 = orient(c, d, a, eps);
    const int o4 = orient(c, d, b, eps);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c, eps)) return true;
    if (o2 == 0 && on_segment(a, b, d, eps)) return true;
    if (o3 == 0 && on_segment(c, d, a, eps)) return true;
    if (o4 == 0 && on_segment(c, d, b, eps)) return true;
    return false;
}

}  // namespace

double polygon_diameter(const std::vector<Vec2>& polygon) {
    double d = 0.0;
    for (size_t i = 0; i < polygon.size(); ++i)
        for (size_t j = i + 1; j < polygon.size(); ++j)
            d = std::max(d, (polygon[i] - polygon[j]).norm());
    return d;
}

bool is_simple(const std::vector<Vec2>& polygon) {
    // Treat a closed polygon (last vertex back at the first, up to the
    // feasibility tolerance) as n edges.
    size_t n = polygon.size();
    const double diam = polygon_diameter(polygon);
    if (n >= 2 && (polygon[n - 1] - polygon[0]).norm() < 1e-8 * diam) --n;
    if (n < 3) throw std::invalid_argument("is_simple needs at least 3 vertices");
    const double eps = 1e-14 * diam;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j],
                                   polygon[(j + 1) % n], eps))
                return false;
        }
    }
    return true;
}

}  // namespace elastica
