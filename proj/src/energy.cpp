#include "elastica/energy.hpp"

#include <cmath>
#include <limits>

namespace elastica {

EnergyReport bending_energy(const ShapePoint& m, const ShapePoint* rest) {
    const int n = m.size();
    if (rest) {
        if (!rest->partition->same_as(*m.partition))
            throw std::invalid_argument("bending_energy: rest shape uses a different partition");
        if (rest->size() != n)
            throw std::invalid_argument("bending_energy: rest shape size mismatch");
    }
    const Eigen::VectorXd& h = m.partition->dual_lengths();
    Eigen::VectorXd d = turning_angles(m);
    if (rest) d -= turning_angles(*rest);

    EnergyReport rep;
    rep.value = (d.array().square() / h.array()).sum();

    rep.gradient = Eigen::VectorXd::Zero(n + 3);
    for (int i = 0; i < n; ++i) {
        const int prev = (i + n - 1) % n;
        rep.gradient[i] = 2.0 * (d[prev] / h[prev] - d[i] / h[i]);
    }

    rep.hessian = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double w = 2.0 / h[i];
        rep.hessian(i, i) += w;
        rep.hessian(j, j) += w;
        rep.hessian(i, j) -= w;
        rep.hessian(j, i) -= w;
    }
    return rep;
}

Eigen::MatrixXd intrinsic_hessian(const ShapePoint& m, const Eigen::VectorXd& energy_grad,
                                  const Eigen::MatrixXd& energy_hess) {
    ConstraintSolver solver(*m.partition);
    return intrinsic_hessian(m, energy_grad, energy_hess, solver);
}

Eigen::MatrixXd intrinsic_hessian(const ShapePoint& m, const Eigen::VectorXd& energy_grad,
                                  const Eigen::MatrixXd& energy_hess,
                                  const ConstraintSolver& solver) {
    const int n = m.size();
    Eigen::VectorXd g(n + 3);
    if (energy_grad.size() == n + 3)
        g = energy_grad;
    else if (energy_grad.size() == n) {
        g.setZero();
        g.head(n) = energy_grad;
    } else {
        throw std::invalid_argument("intrinsic_hessian: gradient size mismatch");
    }
    const Vec2 lambda = solver.dual_multiplier(m, g);

    // D^2 Phi is diagonal per constraint component:
    // d^2/dtheta_i^2 of the quadrature of (cos, sin).
    Eigen::MatrixXd H = energy_hess;
    for (int i = 0; i < n; ++i) {
        const double w = m.partition->step(i);
        const double corr =
            lambda[0] * (-w * std::cos(m.theta[i])) + lambda[1] * (-w * std::sin(m.theta[i]));
        H(i, i) -= corr;
    }
    return 0.5 * (H + H.transpose());
}

double mobius_energy(const std::vector<Vec2>& polygon) {
    // drop an explicitly repeated closing vertex
    size_t n = polygon.size();
    if (n >= 2 && (polygon[n - 1] - polygon[0]).norm() == 0.0) --n;
    if (n < 3) throw std::invalid_argument("mobius_energy needs at least 3 vertices");

    std::vector<double> edge(n);
    for (size_t i = 0; i < n; ++i) {
        edge[i] = (polygon[(i + 1) % n] - polygon[i]).norm();
        if (edge[i] == 0.0) throw std::invalid_argument("mobius_energy: repeated vertex");
    }
    std::vector<double> cum(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + edge[i];
    const double total = cum[n];
    std::vector<double> dual(n);
    for (size_t i = 0; i < n; ++i) dual[i] = 0.5 * (edge[i] + edge[(i + n - 1) % n]);

    double diam = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) diam = std::max(diam, (polygon[i] - polygon[j]).norm());
    const double collision = 1e-12 * diam;

    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wraparound adjacency
            const double chord = (polygon[i] - polygon[j]).norm();
            if (chord < collision) return std::numeric_limits<double>::infinity();
            double arc = cum[j] - cum[i];
            arc = std::min(arc, total - arc);
            acc += 2.0 * (1.0 / (chord * chord) - 1.0 / (arc * arc)) * dual[i] * dual[j];
        }
    }
    return acc;
}

}  // namespace elastica
