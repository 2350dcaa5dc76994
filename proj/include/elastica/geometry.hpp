#ifndef ELASTICA_GEOMETRY_HPP
#define ELASTICA_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

using Vec2 = Eigen::Vector2d;

/// Thrown when the closure constraint Jacobian loses rank (e.g. constant
/// angle function collapses both rows onto one direction).
struct RankDeficiencyError : std::runtime_error {
    explicit RankDeficiencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when feasibility restoration does not converge; carries the last
/// defect norm so callers can decide to shrink their step.
struct RestoreError : std::runtime_error {
    RestoreError(const std::string& what, double defect)
        : std::runtime_error(what), last_defect(defect) {}
    double last_defect;
};

/// Partition 0 = tau_0 < tau_1 < ... < tau_n = 1 of the parameter interval,
/// with the dual edge lengths h_i = (tau_{i+2} - tau_i)/2 (0-based, cyclic
/// via tau_{n+1} = 1 + tau_1) attached to the turning angles.
class Partition {
  public:
    explicit Partition(Eigen::VectorXd tau);
    static std::shared_ptr<const Partition> uniform(int n);

    int size() const { return static_cast<int>(tau_.size()) - 1; }  // n
    const Eigen::VectorXd& tau() const { return tau_; }
    const Eigen::VectorXd& dual_lengths() const { return dual_; }
    /// Subinterval width tau_{i+1} - tau_i for i in [0, n).
    double step(int i) const { return tau_[i + 1] - tau_[i]; }

    bool same_as(const Partition& other) const;

  private:
    Eigen::VectorXd tau_;   // n+1 values
    Eigen::VectorXd dual_;  // n values
};

using PartitionPtr = std::shared_ptr<const Partition>;

/// A point on the discrete shape manifold: piecewise-constant angle function
/// theta (one value per subinterval), curve length L and base point p.
struct ShapePoint {
    Eigen::VectorXd theta;
    double length = 1.0;
    Vec2 base = Vec2::Zero();
    PartitionPtr partition;

    int size() const { return static_cast<int>(theta.size()); }
};

struct TangentVector {
    Eigen::VectorXd dtheta;
    double dlength = 0.0;
    Vec2 dbase = Vec2::Zero();

    Eigen::VectorXd ambient() const;
    static TangentVector from_ambient(const Eigen::VectorXd& v);
};

/// Optional box constraints [L1,L2] x B; enforced by clamping after
/// feasibility restoration only.
struct BoxConstraints {
    double length_min = 1e-12;
    double length_max = std::numeric_limits<double>::infinity();
    Vec2 base_lo = Vec2::Constant(-std::numeric_limits<double>::infinity());
    Vec2 base_hi = Vec2::Constant(std::numeric_limits<double>::infinity());

    static BoxConstraints unbounded() { return {}; }
    void clamp(ShapePoint& m) const;
};

/// Wrap an angle into (-pi, pi]; ties at -pi map to +pi.
double wrap_angle(double x);

/// Turning angles [theta]_i = wrap(theta_{i+1} - theta_i), cyclic, n values.
Eigen::VectorXd turning_angles(const ShapePoint& m);

/// Sum of turning angles / 2*pi; +1 for admissible curves.
int discrete_turning_number(const ShapePoint& m);

/// Vertices of the reconstructed polygon, n+1 points (last repeats the first
/// exactly when the closure defect vanishes).
std::vector<Vec2> reconstruct_polygon(const ShapePoint& m);

/// Quadrature of (cos theta, sin theta) over [0,1]; zero iff the polygon closes.
Vec2 closure_defect(const ShapePoint& m);

/// 2 x n Jacobian of the closure defect with respect to theta.
Eigen::Matrix2Xd closure_jacobian(const ShapePoint& m);

/// Gram matrix of the discrete H^1 inner product on (theta, L, p):
/// mass + cyclic finite-difference stiffness on the theta block, identity
/// on the (L, p) block. Symmetric positive definite.
Eigen::MatrixXd h1_gram(const Partition& partition);

/// Cached solver for the bordered saddle systems built on h1_gram and the
/// closure Jacobian. All geometry operations that need DPhi^+ route
/// through here so the Cholesky factor of the Gram matrix is reused.
class ConstraintSolver {
  public:
    explicit ConstraintSolver(const Partition& partition);

    const Eigen::MatrixXd& gram() const { return gram_; }
    /// G^{-1} v.
    Eigen::VectorXd gram_solve(const Eigen::VectorXd& v) const;
    /// Minimal H^1-norm solution of DPhi(m) u = v (theta block; dL = dp = 0).
    TangentVector pseudo_inverse(const ShapePoint& m, const Vec2& v) const;
    /// Multiplier lambda = (DPhi^+)^T g of the dual saddle system; g over
    /// the ambient coordinates (theta, L, p).
    Vec2 dual_multiplier(const ShapePoint& m, const Eigen::VectorXd& g) const;
    /// G-orthogonal projection of an ambient vector onto ker DPhi.
    Eigen::VectorXd project_tangent(const ShapePoint& m, const Eigen::VectorXd& v) const;
    /// Riesz representative w of the gradient restricted to the tangent
    /// space: [[G, A^T],[A, 0]] [w; xi] = [g; 0]. Returns w.
    Eigen::VectorXd riesz_tangent(const ShapePoint& m, const Eigen::VectorXd& g) const;
    /// H^1 norm sqrt(v^T G v).
    double norm(const Eigen::VectorXd& v) const;

  private:
    // 2x2 Schur complement DPhi G^{-1} DPhi^T with rank check.
    Eigen::Matrix2d schur(const ShapePoint& m, Eigen::MatrixXd& GiAt) const;

    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    int n_;
};

/// Moore-Penrose action u = DPhi^+(m) v in the discrete H^1 metric.
TangentVector apply_pseudo_inverse(const ShapePoint& m, const Vec2& v);

/// Newton-type projection x <- x - DPhi^+(x) Phi(x) until ||Phi|| <= tol.
/// Clamps (L, p) to the box and gauge-fixes theta afterwards (only when at
/// least one iteration ran, so feasible inputs pass through unchanged).
ShapePoint restore_feasibility(const ShapePoint& x0, double tol = 1e-10, int max_iter = 20,
                               const BoxConstraints& box = BoxConstraints::unbounded());

/// Same, reusing a ConstraintSolver for the partition.
ShapePoint restore_feasibility(const ShapePoint& x0, const ConstraintSolver& solver,
                               double tol = 1e-10, int max_iter = 20,
                               const BoxConstraints& box = BoxConstraints::unbounded());

/// Shift theta by a multiple of 2*pi so theta_0 lands in (-pi, pi].
ShapePoint gauge_fix(ShapePoint m);

/// True iff no two non-adjacent closed edges of the polygon intersect.
/// Adjacency includes the wraparound pair. O(n^2) segment tests.
bool is_simple(const std::vector<Vec2>& polygon);

/// Largest pairwise vertex distance.
double polygon_diameter(const std::vector<Vec2>& polygon);

}  // namespace elastica

#endif
