#ifndef ELASTICA_ENERGY_HPP
#define ELASTICA_ENERGY_HPP

#include "elastica/geometry.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace elastica {

/// Value, gradient and (theta-block) Hessian of an energy on the shape space.
/// The gradient spans the ambient coordinates (theta, L, p); for bending
/// energy the L and p components are identically zero.
struct EnergyReport {
    double value = 0.0;
    Eigen::VectorXd gradient;  // n + 3
    Eigen::MatrixXd hessian;   // n x n, theta block only
};

/// Discrete bending energy sum ([theta]_i - [theta*]_i)^2 / h_i, absolute
/// ([theta*] = 0) when no rest shape is given. Branch shifts of the turning
/// angles are treated as locally constant, so the Hessian is the constant
/// matrix 2 D^T diag(1/h) D with D the cyclic difference operator.
EnergyReport bending_energy(const ShapePoint& m, const ShapePoint* rest = nullptr);

/// Constraint-corrected Hessian D^2 E - (DE . DPhi^+) D^2 Phi. The
/// multiplier is obtained from the dual saddle system; the correction is
/// symmetrized before use.
Eigen::MatrixXd intrinsic_hessian(const ShapePoint& m, const Eigen::VectorXd& energy_grad,
                                  const Eigen::MatrixXd& energy_hess);
Eigen::MatrixXd intrinsic_hessian(const ShapePoint& m, const Eigen::VectorXd& energy_grad,
                                  const Eigen::MatrixXd& energy_hess,
                                  const ConstraintSolver& solver);

/// Vertex-pair discretization of the Moebius self-avoidance energy of a
/// closed polygon: sum over non-adjacent pairs of
/// (1/|x_i-x_j|^2 - 1/d_arc^2) * l_i * l_j with polygon dual edge lengths
/// l_i and the shorter arc distance d_arc. Returns +infinity once any
/// non-adjacent pair comes closer than 1e-12 times the diameter.
double mobius_energy(const std::vector<Vec2>& polygon);

}  // namespace elastica

#endif
