#ifndef ELASTICA_SCATTER_HPP
#define ELASTICA_SCATTER_HPP

#include "elastica/geometry.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <complex>
#include <memory>
#include <vector>

namespace elastica {

using Complex = std::complex<double>;

struct SelfIntersectionError : std::runtime_error {
    explicit SelfIntersectionError(const std::string& what) : std::runtime_error(what) {}
};

/// Far-field sampling geometry plus the Helmholtz parameters: wavenumber k,
/// unit direction grids, Nystroem quadrature size 2N and the combined-layer
/// coupling (defaults to k).
struct ScatterConfig {
    double k = 1.0;
    std::vector<Vec2> incident_dirs;
    std::vector<Vec2> measurement_dirs;
    int nystrom_points = 128;  // 2N, even
    double coupling = 0.0;     // 0 means "use k"

    double eta() const { return coupling > 0.0 ? coupling : k; }
    void validate() const;
    /// Equidistant grids starting at angle 0.
    static ScatterConfig equidistant(double k, int n_incident, int n_measurement,
                                     int nystrom_points = 128);
    /// Weight of the discrete data-space inner product, (2pi/#meas)(2pi/#inc).
    double data_weight() const;
};

/// Trigonometric boundary of degree <= N with derived samples at the 2N
/// quadrature nodes s_j = pi j / N.
class SmoothBoundary {
  public:
    SmoothBoundary(Eigen::VectorXd ax, Eigen::VectorXd bx, Eigen::VectorXd ay, Eigen::VectorXd by);

    int degree() const { return static_cast<int>(ax_.size()) - 1; }
    int num_nodes() const { return 2 * degree(); }

    Vec2 point(double s) const { return {eval(ax_, bx_, s, 0), eval(ay_, by_, s, 0)}; }
    Vec2 derivative(double s) const { return {eval(ax_, bx_, s, 1), eval(ay_, by_, s, 1)}; }
    Vec2 second_derivative(double s) const { return {eval(ax_, bx_, s, 2), eval(ay_, by_, s, 2)}; }

    // node arrays (size 2N)
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<Vec2>& z() const { return z_; }
    const std::vector<Vec2>& dz() const { return dz_; }
    const std::vector<Vec2>& ddz() const { return ddz_; }
    const std::vector<double>& speed() const { return speed_; }
    const std::vector<Vec2>& normal() const { return normal_; }

  private:
    static double eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double s, int deriv);

    Eigen::VectorXd ax_, bx_, ay_, by_;  // cos/sin coefficients per component
    std::vector<double> s_;
    std::vector<Vec2> z_, dz_, ddz_, normal_;
    std::vector<double> speed_;
};

/// Far-field samples, rows = measurement directions, cols = incident ones.
struct FarField {
    Eigen::MatrixXcd values;

    /// Column-major stacking over incident directions.
    Eigen::VectorXcd stacked() const { return Eigen::VectorXcd(values.reshaped()); }
    static FarField from_stacked(const Eigen::VectorXcd& v, Eigen::Index rows, Eigen::Index cols);
};

/// Trigonometric interpolation of a closed polygon sampled at equispaced
/// parameters: exact (minimal-norm) when 2 modes + 1 >= n, least-squares
/// truncation otherwise. The polygon may or may not repeat its first vertex.
SmoothBoundary trig_interpolate(const std::vector<Vec2>& polygon, int modes,
                                double closure_tol = 1e-6);

/// Combined double-/single-layer Nystroem solver for one boundary and
/// config; keeps the LU factorizations so far fields, normal derivatives
/// and domain-derivative solves reuse them.
class HelmholtzSolver {
  public:
    HelmholtzSolver(const SmoothBoundary& boundary, const ScatterConfig& config);

    /// Far field of the scattered wave for every incident direction.
    const FarField& far_field() const { return far_field_; }

    /// Normal derivative of the total field at the quadrature nodes for
    /// incident direction index j (lazy direct solve).
    const Eigen::VectorXcd& normal_derivative(int incident_index) const;

    /// Far field of the radiating solution with Dirichlet data given at the
    /// quadrature nodes (Brakhage-Werner solve reusing the factorization).
    Eigen::VectorXcd dirichlet_far_field(const Eigen::VectorXcd& boundary_data) const;

    const SmoothBoundary& boundary() const { return boundary_; }
    const ScatterConfig& config() const { return config_; }

  private:
    void solve_all();

    SmoothBoundary boundary_;
    ScatterConfig config_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_bw_;
    mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_dir_;
    Eigen::MatrixXcd far_kernel_;  // n_meas x 2N evaluation of the BW far-field rule
    FarField far_field_;
    mutable std::vector<Eigen::VectorXcd> normal_derivs_;
};

/// Far field of the scattered wave for the given boundary.
FarField solve_forward(const SmoothBoundary& boundary, const ScatterConfig& config);

/// Composition reconstruct_polygon -> trig_interpolate -> solve_forward.
/// Rejects self-intersecting polygons.
FarField far_field_map(const ShapePoint& m, const ScatterConfig& config);

/// Derivative DF(m) h of the far-field map: boundary perturbation through
/// the reconstruction/interpolation chain, then the exterior Dirichlet
/// problem with data -<gamma_h, nu> du/dnu.
FarField domain_derivative(const ShapePoint& m, const ScatterConfig& config,
                           const TangentVector& h);

/// Far field plus the full Jacobian over the ambient basis
/// (theta_1..theta_n, L, p_x, p_y); one factorization, n+3 columns.
struct FarFieldJacobian {
    FarField value;
    Eigen::MatrixXcd jacobian;  // (n_meas*n_inc) x (n+3), column-major data stacking
};
FarFieldJacobian far_field_with_jacobian(const ShapePoint& m, const ScatterConfig& config);

}  // namespace elastica

#endif
