#include "elastica/sampling.hpp"

#include "elastica/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace elastica {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const Complex kImag(0.0, 1.0);
}  // namespace

FarFieldOperator FarFieldOperator::build(const FarField& data, const ScatterConfig& config) {
    const auto& meas = config.measurement_dirs;
    const auto& inc = config.incident_dirs;
    if (meas.size() != inc.size())
        throw std::invalid_argument("far-field operator requires matched full-aperture grids");
    for (size_t i = 0; i < meas.size(); ++i)
        if ((meas[i] - inc[i]).norm() > 1e-12)
            throw std::invalid_argument("far-field operator requires identical direction grids");
    if (data.values.rows() != static_cast<Eigen::Index>(meas.size()) ||
        data.values.cols() != static_cast<Eigen::Index>(inc.size()))
        throw std::invalid_argument("far-field data dimensions do not match the grids");

    FarFieldOperator op;
    op.grid = meas;
    op.k = config.k;
    op.matrix = (2.0 * kPi / static_cast<double>(meas.size())) * data.values;
    return op;
}

QuarterInverse::QuarterInverse(const FarFieldOperator& op, double relative_cutoff) {
    if (op.matrix.rows() != op.matrix.cols())
        throw std::invalid_argument("quarter_inverse: operator matrix must be square");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.matrix, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = relative_cutoff * sv[0];
    int kept = 0;
    while (kept < sv.size() && sv[kept] >= cutoff) ++kept;
    if (kept == 0) throw std::invalid_argument("quarter_inverse: cutoff removed every mode");
    basis_ = svd.matrixV().leftCols(kept);
    sigma_ = sv.head(kept);
}

Eigen::VectorXcd QuarterInverse::apply(const Eigen::VectorXcd& v) const {
    const Eigen::VectorXcd coeff = basis_.adjoint() * v;
    return basis_ * (coeff.array() / sigma_.array().sqrt()).matrix();
}

Eigen::MatrixXcd QuarterInverse::as_matrix() const {
    return basis_ * sigma_.array().rsqrt().matrix().asDiagonal() * basis_.adjoint();
}

double QuarterInverse::chi(const Eigen::VectorXcd& r_z) const {
    const Eigen::VectorXcd coeff = basis_.adjoint() * r_z;
    return (coeff.array().abs2() / sigma_.array()).sum() + 1e-300;
}

Vec2 QuarterInverse::chi_gradient(const Eigen::VectorXcd& r_z, const Eigen::VectorXcd& dr_dx,
                                  const Eigen::VectorXcd& dr_dy) const {
    const Eigen::VectorXcd c = basis_.adjoint() * r_z;
    const Eigen::VectorXcd cx = basis_.adjoint() * dr_dx;
    const Eigen::VectorXcd cy = basis_.adjoint() * dr_dy;
    // 2 Re <A r_z, A dr> with A^H A = V Sigma^{-1} V^H
    const double gx = 2.0 * (c.array().conjugate() * cx.array() / sigma_.array()).real().sum();
    const double gy = 2.0 * (c.array().conjugate() * cy.array() / sigma_.array()).real().sum();
    return {gx, gy};
}

Eigen::VectorXcd point_source_far_field(const Vec2& z, const std::vector<Vec2>& grid, double k) {
    Eigen::VectorXcd r(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) r[j] = std::exp(-kImag * (k * grid[j].dot(z)));
    return r;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> point_source_gradient(const Vec2& z,
                                                                    const std::vector<Vec2>& grid,
                                                                    double k) {
    Eigen::VectorXcd dx(grid.size()), dy(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) {
        const Complex r = std::exp(-kImag * (k * grid[j].dot(z)));
        dx[j] = -kImag * k * grid[j].x() * r;
        dy[j] = -kImag * k * grid[j].y() * r;
    }
    return {std::move(dx), std::move(dy)};
}

Vec2 IndicatorField::grid_point(int ix, int iy) const {
    const double fx = resolution > 1 ? static_cast<double>(ix) / (resolution - 1) : 0.0;
    const double fy = resolution > 1 ? static_cast<double>(iy) / (resolution - 1) : 0.0;
    return {box.xmin + fx * (box.xmax - box.xmin), box.ymin + fy * (box.ymax - box.ymin)};
}

IndicatorField indicator_field(const QuarterInverse& A, const GridBox& box, int resolution,
                               double k, const std::vector<Vec2>& grid) {
    if (resolution < 2) throw std::invalid_argument("indicator_field: resolution must be >= 2");
    if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin))
        throw std::invalid_argument("indicator_field: empty box");
    IndicatorField field;
    field.box = box;
    field.resolution = resolution;
    field.chi.resize(resolution, resolution);
    parallel_for(resolution, [&](int ix) {
        for (int iy = 0; iy < resolution; ++iy) {
            const Vec2 z = field.grid_point(ix, iy);
            field.chi(ix, iy) = A.chi(point_source_far_field(z, grid, k));
        }
    });
    field.inv_chi = field.chi.cwiseInverse();
    return field;
}

ChiFunction ChiFunction::analytic(const QuarterInverse& A, const std::vector<Vec2>& grid,
                                  double k) {
    ChiFunction f;
    f.value = [&A, grid, k](const Vec2& z) {
        return A.chi(point_source_far_field(z, grid, k));
    };
    f.gradient = [&A, grid, k](const Vec2& z) {
        const Eigen::VectorXcd r = point_source_far_field(z, grid, k);
        auto [dx, dy] = point_source_gradient(z, grid, k);
        return A.chi_gradient(r, dx, dy);
    };
    return f;
}

double otsu_threshold(const Eigen::MatrixXd& values) {
    const int bins = 256;
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (!(hi > lo)) return lo;
    Eigen::VectorXd hist = Eigen::VectorXd::Zero(bins);
    const double scale = bins / (hi - lo);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        int b = static_cast<int>((values(i) - lo) * scale);
        b = std::min(b, bins - 1);
        hist[b] += 1.0;
    }
    const double total = hist.sum();
    double sum_all = 0.0;
    for (int b = 0; b < bins; ++b) sum_all += b * hist[b];
    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    int best_lo = bins / 2, best_hi = bins / 2;
    for (int b = 0; b < bins - 1; ++b) {
        w0 += hist[b];
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += b * hist[b];
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        // the between-class variance plateaus across an empty gap; take the
        // plateau midpoint
        if (between > best * (1.0 + 1e-12)) {
            best = between;
            best_lo = best_hi = b;
        } else if (between >= best * (1.0 - 1e-12)) {
            best_hi = b;
        }
    }
    return lo + (0.5 * (best_lo + best_hi) + 0.5) / scale;
}

ShapePoint initial_guess_from_indicator(const IndicatorField& field, int n) {
    double wsum = 0.0;
    Vec2 centroid = Vec2::Zero();
    for (int ix = 0; ix < field.resolution; ++ix)
        for (int iy = 0; iy < field.resolution; ++iy) {
            const double w = field.inv_chi(ix, iy);
            wsum += w;
            centroid += w * field.grid_point(ix, iy);
        }
    centroid /= wsum;
    double second = 0.0;
    for (int ix = 0; ix < field.resolution; ++ix)
        for (int iy = 0; iy < field.resolution; ++iy)
            second += field.inv_chi(ix, iy) *
                      (field.grid_point(ix, iy) - centroid).squaredNorm();
    second /= wsum;
    const double radius = std::sqrt(2.0 * second);

    ShapePoint m;
    m.partition = Partition::uniform(n);
    m.theta.resize(n);
    for (int i = 0; i < n; ++i) m.theta[i] = 2.0 * kPi * (i + 1) / n + kPi / 2.0;
    m.length = 2.0 * kPi * radius;
    // vertex 0 sits right of the centroid; tangent at i=0 matches the circle
    m.base = centroid + radius * Vec2(std::cos(2.0 * kPi * 0.5 / n), std::sin(2.0 * kPi * 0.5 / n));
    return gauge_fix(restore_feasibility(m));
}

Eigen::VectorXcd LevelLineOperator::apply(const ShapePoint& m) const {
    if (m.size() != n_) throw std::invalid_argument("level-line operator: size mismatch");
    const std::vector<Vec2> poly = reconstruct_polygon(m);
    Eigen::VectorXcd out(n_);
    for (int i = 0; i < n_; ++i) out[i] = 1.0 / chi_.value(poly[i]);
    return out;
}

std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> LevelLineOperator::apply_with_jacobian(
    const ShapePoint& m) const {
    if (m.size() != n_) throw std::invalid_argument("level-line operator: size mismatch");
    const std::vector<Vec2> poly = reconstruct_polygon(m);
    Eigen::VectorXcd value(n_);
    Eigen::MatrixXcd Jc = Eigen::MatrixXcd::Zero(n_, n_ + 3);

    // dvertex_i/d(theta,L,p) assembled row by row; (dF)_i = -chi^{-2} <grad chi, dvertex_i>
    for (int i = 0; i < n_; ++i) {
        const double c = chi_.value(poly[i]);
        value[i] = 1.0 / c;
        const Vec2 g = chi_.gradient(poly[i]);
        const double f = -1.0 / (c * c);
        // base point
        Jc(i, n_ + 1) = f * g.x();
        Jc(i, n_ + 2) = f * g.y();
        // length
        Jc(i, n_) = f * g.dot((poly[i] - m.base) / m.length);
        // angles l < i
        for (int l = 0; l < i; ++l) {
            const double w = m.length * m.partition->step(l);
            const Vec2 dv = w * Vec2(-std::sin(m.theta[l]), std::cos(m.theta[l]));
            Jc(i, l) = f * g.dot(dv);
        }
    }
    return {std::move(value), std::move(Jc)};
}

LevelLineFitResult level_line_fit(const ChiFunction& chi, double beta, const ShapePoint& m0,
                                  SolverSettings settings, double pseudo_noise) {
    if (!(beta > 0.0)) throw std::invalid_argument("level_line_fit: beta must be positive");
    const int n = m0.size();
    // normalize the target level to 1 so the absolute solver tolerances see
    // an O(1) data scale; the beta level line of chi is the 1 level line of
    // beta*chi
    ChiFunction scaled;
    scaled.value = [chi, beta](const Vec2& z) { return beta * chi.value(z); };
    scaled.gradient = [chi, beta](const Vec2& z) { return Vec2(beta * chi.gradient(z)); };
    LevelLineOperator op(scaled, n);

    TikhonovProblem problem;
    problem.forward = &op;
    problem.data = Eigen::VectorXcd::Constant(n, Complex(1.0, 0.0));
    problem.noise_level = pseudo_noise * std::sqrt(op.weight()) * problem.data.norm();
    problem.rest = m0;
    problem.penalty = Penalty::kBending;

    ContinuationResult res = discrepancy_continuation(problem, m0, settings);
    LevelLineFitResult out;
    out.shape = std::move(res.shape);
    out.alpha_final = res.alpha_final;
    out.discrepancy_reached = res.status == ContinuationStatus::kDiscrepancyReached;
    out.simple = is_simple(reconstruct_polygon(out.shape));
    out.trace = std::move(res.trace);
    return out;
}

}  // namespace elastica
