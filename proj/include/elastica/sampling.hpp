#ifndef ELASTICA_SAMPLING_HPP
#define ELASTICA_SAMPLING_HPP

#include "elastica/optimize.hpp"
#include "elastica/scatter.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace elastica {

/// Quadrature discretization of the far-field integral operator on matched
/// equidistant grids (full aperture); entry weight 2*pi/#dirs.
struct FarFieldOperator {
    Eigen::MatrixXcd matrix;
    std::vector<Vec2> grid;
    double k = 0.0;

    static FarFieldOperator build(const FarField& data, const ScatterConfig& config);
};

/// Truncated quarter-power inverse A ~ (U*U)^{-1/4} from the singular value
/// decomposition; modes below cutoff * sigma_max are dropped.
class QuarterInverse {
  public:
    QuarterInverse(const FarFieldOperator& op, double relative_cutoff);

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    Eigen::MatrixXcd as_matrix() const;
    int retained_modes() const { return static_cast<int>(sigma_.size()); }
    /// chi(z) = ||A r_z||^2 evaluated through the retained singular basis.
    double chi(const Eigen::VectorXcd& r_z) const;
    /// gradient d chi/dz via 2 Re <A r_z, A dr_z>.
    Vec2 chi_gradient(const Eigen::VectorXcd& r_z, const Eigen::VectorXcd& dr_dx,
                      const Eigen::VectorXcd& dr_dy) const;

  private:
    Eigen::MatrixXcd basis_;  // right singular vectors, retained columns
    Eigen::VectorXd sigma_;
};

/// r_z(xhat_j) = exp(-i k <xhat_j, z>).
Eigen::VectorXcd point_source_far_field(const Vec2& z, const std::vector<Vec2>& grid, double k);
/// Componentwise derivatives of r_z with respect to z.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> point_source_gradient(const Vec2& z,
                                                                    const std::vector<Vec2>& grid,
                                                                    double k);

struct GridBox {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

/// chi on a rectangular lattice (row index = x, column index = y).
struct IndicatorField {
    GridBox box;
    int resolution = 0;
    Eigen::MatrixXd chi;
    Eigen::MatrixXd inv_chi;

    Vec2 grid_point(int ix, int iy) const;
};

IndicatorField indicator_field(const QuarterInverse& A, const GridBox& box, int resolution,
                               double k, const std::vector<Vec2>& grid);

/// Differentiable indicator interface for the level-line fit; the analytic
/// formula built on A is the production implementation, synthetic fields
/// plug in for tests. The analytic variant holds a reference to A, which
/// must outlive the function object.
struct ChiFunction {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;

    static ChiFunction analytic(const QuarterInverse& A, const std::vector<Vec2>& grid, double k);
};

/// Otsu two-class threshold of the 1/chi histogram; used as the default
/// level beta.
double otsu_threshold(const Eigen::MatrixXd& values);

/// Circle initial guess from the 1/chi-weighted lattice moments.
ShapePoint initial_guess_from_indicator(const IndicatorField& field, int n);

/// Forward operator (F(m))_i = 1/chi(vertex_i) with data beta * 1 in the
/// (1/n)-weighted l2 norm.
class LevelLineOperator final : public ForwardOperator {
  public:
    LevelLineOperator(ChiFunction chi, int n) : chi_(std::move(chi)), n_(n) {}
    Eigen::Index dim() const override { return n_; }
    double weight() const override { return 1.0 / static_cast<double>(n_); }
    Eigen::VectorXcd apply(const ShapePoint& m) const override;
    std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> apply_with_jacobian(
        const ShapePoint& m) const override;

  private:
    ChiFunction chi_;
    int n_;
};

struct LevelLineFitResult {
    ShapePoint shape;
    double alpha_final = 0.0;
    bool discrepancy_reached = false;
    bool simple = false;
    RunTrace trace;
};

/// Tikhonov fit of the beta level line of chi with the bending penalty
/// relative to m0. `pseudo_noise` sets the discrepancy target relative to
/// ||beta * 1||.
LevelLineFitResult level_line_fit(const ChiFunction& chi, double beta, const ShapePoint& m0,
                                  SolverSettings settings, double pseudo_noise = 0.01);

}  // namespace elastica

#endif
