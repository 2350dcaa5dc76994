#include "elastica/scatter.hpp"

#include "elastica/bessel.hpp"
#include "elastica/parallel.hpp"

#include <cmath>

namespace elastica {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
const Complex kImag(0.0, 1.0);
}  // namespace

void ScatterConfig::validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("scatter: wavenumber must be positive");
    if (nystrom_points < 16 || nystrom_points % 2 != 0)
        throw std::invalid_argument("scatter: nystrom_points must be even and >= 16");
    if (incident_dirs.empty() || measurement_dirs.empty())
        throw std::invalid_argument("scatter: direction grids must be nonempty");
    for (const auto& d : incident_dirs)
        if (std::abs(d.norm() - 1.0) > 1e-14)
            throw std::invalid_argument("scatter: incident direction not unit length");
    for (const auto& d : measurement_dirs)
        if (std::abs(d.norm() - 1.0) > 1e-14)
            throw std::invalid_argument("scatter: measurement direction not unit length");
}

ScatterConfig ScatterConfig::equidistant(double k, int n_incident, int n_measurement,
                                         int nystrom_points) {
    ScatterConfig c;
    c.k = k;
    c.nystrom_points = nystrom_points;
    c.incident_dirs.reserve(n_incident);
    for (int i = 0; i < n_incident; ++i) {
        const double phi = 2.0 * kPi * i / n_incident;
        c.incident_dirs.emplace_back(std::cos(phi), std::sin(phi));
    }
    c.measurement_dirs.reserve(n_measurement);
    for (int i = 0; i < n_measurement; ++i) {
        const double phi = 2.0 * kPi * i / n_measurement;
        c.measurement_dirs.emplace_back(std::cos(phi), std::sin(phi));
    }
    c.validate();
    return c;
}

double ScatterConfig::data_weight() const {
    return (2.0 * kPi / static_cast<double>(measurement_dirs.size())) *
           (2.0 * kPi / static_cast<double>(incident_dirs.size()));
}

SmoothBoundary::SmoothBoundary(Eigen::VectorXd ax, Eigen::VectorXd bx, Eigen::VectorXd ay,
                               Eigen::VectorXd by)
    : ax_(std::move(ax)), bx_(std::move(bx)), ay_(std::move(ay)), by_(std::move(by)) {
    const int N = degree();
    if (N < 2) throw std::invalid_argument("boundary needs trigonometric degree >= 2");
    const int m = 2 * N;
    s_.resize(m);
    z_.resize(m);
    dz_.resize(m);
    ddz_.resize(m);
    speed_.resize(m);
    normal_.resize(m);
    for (int j = 0; j < m; ++j) {
        s_[j] = kPi * j / N;
        z_[j] = point(s_[j]);
        dz_[j] = derivative(s_[j]);
        ddz_[j] = second_derivative(s_[j]);
        speed_[j] = dz_[j].norm();
        if (!(speed_[j] > 1e-12))
            throw std::invalid_argument("boundary parameterization degenerates at a node");
        normal_[j] = Vec2(dz_[j].y(), -dz_[j].x()) / speed_[j];
    }
}

double SmoothBoundary::eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double s,
                            int deriv) {
    double acc = deriv == 0 ? a[0] : 0.0;
    for (int m = 1; m < a.size(); ++m) {
        const double c = std::cos(m * s), sn = std::sin(m * s);
        switch (deriv) {
            case 0: acc += a[m] * c + b[m] * sn; break;
            case 1: acc += m * (-a[m] * sn + b[m] * c); break;
            default: acc += -double(m) * m * (a[m] * c + b[m] * sn); break;
        }
    }
    return acc;
}

FarField FarField::from_stacked(const Eigen::VectorXcd& v, Eigen::Index rows, Eigen::Index cols) {
    FarField f;
    f.values = v.reshaped(rows, cols);
    return f;
}

namespace {

// Truncated DFT of real samples; exact interpolation (minimal-norm) once
// 2*modes+1 covers the sample count.
void trig_fit(const std::vector<double>& f, int modes, Eigen::VectorXd& a, Eigen::VectorXd& b) {
    const int n = static_cast<int>(f.size());
    a = Eigen::VectorXd::Zero(modes + 1);
    b = Eigen::VectorXd::Zero(modes + 1);
    const int half = n / 2;
    const int mmax = std::min(modes, (n - 1) / 2);
    for (int m = 0; m <= mmax; ++m) {
        double cr = 0.0, ci = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = 2.0 * kPi * j * m / n;
            cr += f[j] * std::cos(ang);
            ci -= f[j] * std::sin(ang);
        }
        cr /= n;
        ci /= n;
        if (m == 0) {
            a[0] = cr;
        } else {
            a[m] = 2.0 * cr;
            b[m] = -2.0 * ci;
        }
    }
    if (n % 2 == 0 && modes >= half) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += f[j] * ((j % 2 == 0) ? 1.0 : -1.0);
        a[half] = s / n;
    }
}

}  // namespace

SmoothBoundary trig_interpolate(const std::vector<Vec2>& polygon, int modes, double closure_tol) {
    std::vector<Vec2> v = polygon;
    if (v.size() < 4) throw std::invalid_argument("trig_interpolate: too few vertices");
    const double diam = polygon_diameter(v);
    if (!(diam > 0.0)) throw std::invalid_argument("trig_interpolate: degenerate polygon");
    if ((v.front() - v.back()).norm() <= closure_tol * diam) {
        v.pop_back();
    } else {
        throw std::invalid_argument("trig_interpolate: polygon is not closed");
    }
    for (size_t i = 0; i < v.size(); ++i)
        if ((v[i] - v[(i + 1) % v.size()]).norm() < 1e-12 * diam)
            throw std::invalid_argument("trig_interpolate: repeated vertex");

    const int n = static_cast<int>(v.size());
    std::vector<double> fx(n), fy(n);
    for (int i = 0; i < n; ++i) {
        fx[i] = v[i].x();
        fy[i] = v[i].y();
    }
    Eigen::VectorXd ax, bx, ay, by;
    trig_fit(fx, modes, ax, bx);
    trig_fit(fy, modes, ay, by);
    return SmoothBoundary(std::move(ax), std::move(bx), std::move(ay), std::move(by));
}

namespace {

struct KernelMatrices {
    Eigen::MatrixXcd bw;   // I + K_L - i eta K_M
    Eigen::MatrixXcd dir;  // I + K_L' - i eta K_M
};

// Kress-Martensen weights R_j for the 2N-point rule on the logarithmic kernel.
std::vector<double> kress_weights(int N) {
    std::vector<double> R(2 * N);
    for (int j = 0; j < 2 * N; ++j) {
        double s = 0.0;
        for (int m = 1; m < N; ++m) s += std::cos(m * j * kPi / N) / m;
        R[j] = -2.0 * kPi / N * s - ((j % 2 == 0) ? 1.0 : -1.0) * kPi / (N * N);
    }
    return R;
}

KernelMatrices assemble_kernels(const SmoothBoundary& bd, double k, double eta) {
    const int m = bd.num_nodes();
    const int N = m / 2;
    const auto& s = bd.nodes();
    const auto& z = bd.z();
    const auto& dz = bd.dz();
    const auto& ddz = bd.ddz();
    const auto& sp = bd.speed();
    const std::vector<double> R = kress_weights(N);
    const double trap = kPi / N;

    KernelMatrices K;
    K.bw.resize(m, m);
    K.dir.resize(m, m);
    parallel_for(m, [&](int i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) {
                // smooth-part diagonal limits of the split kernels
                const double curv = (dz[i].y() * ddz[i].x() - dz[i].x() * ddz[i].y()) /
                                    (2.0 * kPi * sp[i] * sp[i]);
                const double M1d = -sp[i] / (2.0 * kPi);
                const Complex M2d =
                    (0.5 * kImag - kEulerGamma / kPi - std::log(0.5 * k * sp[i]) / kPi) * sp[i];
                const Complex Mii = R[0] * M1d + trap * M2d;
                const Complex Lii = trap * curv;  // L1 and L1' vanish on the diagonal
                K.bw(i, i) = 1.0 + Lii - kImag * eta * Mii;
                K.dir(i, i) = 1.0 + Lii - kImag * eta * Mii;
                continue;
            }
            const Vec2 d = z[i] - z[j];
            const double r = d.norm();
            const double kr = k * r;
            const double lg = std::log(4.0 * std::pow(std::sin(0.5 * (s[i] - s[j])), 2));
            const double J0 = bessel_j0(kr), J1 = bessel_j1(kr);
            const Complex H0(J0, bessel_y0(kr)), H1(J1, bessel_y1(kr));

            const Complex M = 0.5 * kImag * H0 * sp[j];
            const double M1 = -J0 * sp[j] / (2.0 * kPi);
            const Complex Mij = R[std::abs(i - j)] * M1 + trap * (M - M1 * lg);

            const double A = dz[j].y() * d.x() - dz[j].x() * d.y();
            const Complex L = 0.5 * kImag * k * H1 * A / r;
            const double L1 = -k / (2.0 * kPi) * J1 * A / r;
            const Complex Lij = R[std::abs(i - j)] * L1 + trap * (L - L1 * lg);

            const double At = dz[i].y() * d.x() - dz[i].x() * d.y();
            const Complex Lp = -0.5 * kImag * k * H1 * At * sp[j] / (r * sp[i]);
            const double L1p = k / (2.0 * kPi) * J1 * At * sp[j] / (r * sp[i]);
            const Complex Lpij = R[std::abs(i - j)] * L1p + trap * (Lp - L1p * lg);

            K.bw(i, j) = Lij - kImag * eta * Mij;
            K.dir(i, j) = Lpij - kImag * eta * Mij;
        }
    });
    return K;
}

}  // namespace

HelmholtzSolver::HelmholtzSolver(const SmoothBoundary& boundary, const ScatterConfig& config)
    : boundary_(boundary), config_(config) {
    config_.validate();
    if (boundary_.num_nodes() != config_.nystrom_points)
        throw std::invalid_argument("boundary node count does not match nystrom_points");
    solve_all();
}

void HelmholtzSolver::solve_all() {
    const int m = boundary_.num_nodes();
    const int N = m / 2;
    const double k = config_.k;
    const double eta = config_.eta();
    KernelMatrices kers = assemble_kernels(boundary_, k, eta);
    lu_bw_.compute(kers.bw);
    lu_dir_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(kers.dir);
    const double rc = lu_bw_.rcond();
    if (!(rc > 1e-14))
        throw std::runtime_error("boundary integral system is numerically singular (rcond " +
                                 std::to_string(rc) + ")");

    const auto& z = boundary_.z();
    const auto& nu = boundary_.normal();
    const auto& sp = boundary_.speed();
    const int n_meas = static_cast<int>(config_.measurement_dirs.size());
    const int n_inc = static_cast<int>(config_.incident_dirs.size());
    const Complex ck = std::exp(kImag * (kPi / 4.0)) / std::sqrt(8.0 * kPi * k);

    far_kernel_.resize(n_meas, m);
    for (int i = 0; i < n_meas; ++i) {
        const Vec2 xh = config_.measurement_dirs[i];
        for (int j = 0; j < m; ++j) {
            const Complex ph = std::exp(-kImag * (k * xh.dot(z[j]))) * sp[j] * (kPi / N);
            far_kernel_(i, j) = ck * (-kImag) * (k * xh.dot(nu[j]) + eta) * ph;
        }
    }

    // one Brakhage-Werner solve per incident wave
    Eigen::MatrixXcd rhs(m, n_inc);
    for (int c = 0; c < n_inc; ++c) {
        const Vec2 d = config_.incident_dirs[c];
        for (int j = 0; j < m; ++j) rhs(j, c) = -2.0 * std::exp(kImag * (k * z[j].dot(d)));
    }
    const Eigen::MatrixXcd psi = lu_bw_.solve(rhs);
    far_field_.values = far_kernel_ * psi;
    normal_derivs_.assign(n_inc, Eigen::VectorXcd());
}

const Eigen::VectorXcd& HelmholtzSolver::normal_derivative(int incident_index) const {
    auto& cache = normal_derivs_[incident_index];
    if (cache.size() != 0) return cache;
    const int m = boundary_.num_nodes();
    const double k = config_.k;
    const double eta = config_.eta();
    const auto& z = boundary_.z();
    const auto& nu = boundary_.normal();
    const Vec2 d = config_.incident_dirs[incident_index];
    Eigen::VectorXcd rhs(m);
    for (int j = 0; j < m; ++j) {
        const Complex ui = std::exp(kImag * (k * z[j].dot(d)));
        const Complex dui = kImag * k * nu[j].dot(d) * ui;
        rhs[j] = 2.0 * (dui - kImag * eta * ui);
    }
    cache = lu_dir_->solve(rhs);
    return cache;
}

Eigen::VectorXcd HelmholtzSolver::dirichlet_far_field(const Eigen::VectorXcd& boundary_data) const {
    const Eigen::VectorXcd psi = lu_bw_.solve(Eigen::VectorXcd(2.0 * boundary_data));
    return far_kernel_ * psi;
}

FarField solve_forward(const SmoothBoundary& boundary, const ScatterConfig& config) {
    return HelmholtzSolver(boundary, config).far_field();
}

namespace {

std::vector<Vec2> checked_polygon(const ShapePoint& m) {
    std::vector<Vec2> poly = reconstruct_polygon(m);
    if (!is_simple(poly)) throw SelfIntersectionError("far_field_map: curve self-intersects");
    return poly;
}

// Chain rule dvertices/d(theta, L, p); vertices exclude the closing repeat.
std::vector<Vec2> vertex_perturbation(const ShapePoint& m, const std::vector<Vec2>& vertices,
                                      const TangentVector& h) {
    const int n = m.size();
    std::vector<Vec2> dv(n, Vec2::Zero());
    Vec2 acc = Vec2::Zero();
    for (int i = 0; i < n; ++i) {
        dv[i] = h.dbase + acc + h.dlength / m.length * (vertices[i] - m.base);
        if (i + 1 < n) {
            const double w = m.length * m.partition->step(i);
            acc += w * h.dtheta[i] * Vec2(-std::sin(m.theta[i]), std::cos(m.theta[i]));
        }
    }
    return dv;
}

// Periodic trigonometric fit of a (possibly degenerate) perturbation field
// sampled at the polygon parameters, evaluated at the quadrature nodes.
Eigen::VectorXd perturbation_normal_component(const std::vector<Vec2>& dverts,
                                              const SmoothBoundary& bd, int modes) {
    const int n = static_cast<int>(dverts.size());
    std::vector<double> fx(n), fy(n);
    for (int i = 0; i < n; ++i) {
        fx[i] = dverts[i].x();
        fy[i] = dverts[i].y();
    }
    Eigen::VectorXd ax, bx, ay, by;
    trig_fit(fx, modes, ax, bx);
    trig_fit(fy, modes, ay, by);
    const auto& s = bd.nodes();
    Eigen::VectorXd hn(bd.num_nodes());
    for (int j = 0; j < bd.num_nodes(); ++j) {
        double gx = ax[0], gy = ay[0];
        for (int mm = 1; mm <= modes; ++mm) {
            const double c = std::cos(mm * s[j]), sn = std::sin(mm * s[j]);
            gx += ax[mm] * c + bx[mm] * sn;
            gy += ay[mm] * c + by[mm] * sn;
        }
        hn[j] = Vec2(gx, gy).dot(bd.normal()[j]);
    }
    return hn;
}

}  // namespace

FarField far_field_map(const ShapePoint& m, const ScatterConfig& config) {
    const std::vector<Vec2> poly = checked_polygon(m);
    SmoothBoundary bd = trig_interpolate(poly, config.nystrom_points / 2);
    return solve_forward(bd, config);
}

FarField domain_derivative(const ShapePoint& m, const ScatterConfig& config,
                           const TangentVector& h) {
    const std::vector<Vec2> poly = checked_polygon(m);
    const int modes = config.nystrom_points / 2;
    SmoothBoundary bd = trig_interpolate(poly, modes);
    HelmholtzSolver solver(bd, config);

    const std::vector<Vec2> dverts = vertex_perturbation(m, poly, h);
    const Eigen::VectorXd hn = perturbation_normal_component(dverts, bd, modes);
    const int n_inc = static_cast<int>(config.incident_dirs.size());
    const int n_meas = static_cast<int>(config.measurement_dirs.size());

    FarField out;
    out.values.resize(n_meas, n_inc);
    for (int c = 0; c < n_inc; ++c) {
        const Eigen::VectorXcd& g = solver.normal_derivative(c);
        Eigen::VectorXcd data = -(hn.array() * g.array());
        out.values.col(c) = solver.dirichlet_far_field(data);
    }
    return out;
}

FarFieldJacobian far_field_with_jacobian(const ShapePoint& m, const ScatterConfig& config) {
    const std::vector<Vec2> poly = checked_polygon(m);
    const int modes = config.nystrom_points / 2;
    SmoothBoundary bd = trig_interpolate(poly, modes);
    HelmholtzSolver solver(bd, config);

    const int n = m.size();
    const int n_inc = static_cast<int>(config.incident_dirs.size());
    const int n_meas = static_cast<int>(config.measurement_dirs.size());

    FarFieldJacobian out;
    out.value = solver.far_field();
    out.jacobian.resize(static_cast<Eigen::Index>(n_meas) * n_inc, n + 3);

    for (int c = 0; c < n_inc; ++c) solver.normal_derivative(c);  // fill caches

    parallel_for(n + 3, [&](int col) {
        TangentVector h;
        h.dtheta = Eigen::VectorXd::Zero(n);
        if (col < n)
            h.dtheta[col] = 1.0;
        else if (col == n)
            h.dlength = 1.0;
        else
            h.dbase[col - n - 1] = 1.0;

        const std::vector<Vec2> dverts = vertex_perturbation(m, poly, h);
        const Eigen::VectorXd hn = perturbation_normal_component(dverts, bd, modes);
        for (int c = 0; c < n_inc; ++c) {
            const Eigen::VectorXcd& g = solver.normal_derivative(c);
            Eigen::VectorXcd data = -(hn.array() * g.array());
            out.jacobian.block(static_cast<Eigen::Index>(c) * n_meas, col, n_meas, 1) =
                solver.dirichlet_far_field(data);
        }
    });
    return out;
}

}  // namespace elastica
