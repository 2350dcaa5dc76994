#include "elastica/optimize.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace elastica {

namespace {

double weighted_norm(double w, const Eigen::VectorXcd& v) { return std::sqrt(w) * v.norm(); }

struct PenaltyEval {
    double value = 0.0;
    Eigen::VectorXd gradient;                // n+3
    Eigen::MatrixXd hessian;                 // n x n (bending block)
    Eigen::VectorXd bending_gradient_theta;  // n, feeds the intrinsic correction
};

// Central finite differences of the Moebius term; the penalized variant has
// no analytic gradient here, the term otherwise serves as a barrier only.
Eigen::VectorXd mobius_fd_gradient(const ShapePoint& m) {
    const int n = m.size();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n + 3);
    const double eps = 1e-6;
    auto value_at = [](const ShapePoint& s) { return mobius_energy(reconstruct_polygon(s)); };
    for (int i = 0; i < n + 3; ++i) {
        ShapePoint plus = m, minus = m;
        if (i < n) {
            plus.theta[i] += eps;
            minus.theta[i] -= eps;
        } else if (i == n) {
            plus.length += eps;
            minus.length -= eps;
        } else {
            plus.base[i - n - 1] += eps;
            minus.base[i - n - 1] -= eps;
        }
        g[i] = (value_at(plus) - value_at(minus)) / (2.0 * eps);
    }
    return g;
}

PenaltyEval eval_penalty(const TikhonovProblem& problem, const ShapePoint& m,
                         bool with_derivatives) {
    EnergyReport bend = bending_energy(m, &problem.rest);
    PenaltyEval out;
    out.value = bend.value;
    out.gradient = std::move(bend.gradient);
    out.hessian = std::move(bend.hessian);
    out.bending_gradient_theta = out.gradient.head(m.size());
    if (problem.penalty == Penalty::kBendingPlusMobius) {
        const double mob = mobius_energy(reconstruct_polygon(m));
        out.value += mob;
        if (with_derivatives && std::isfinite(mob)) out.gradient += mobius_fd_gradient(m);
    }
    return out;
}

// Equilibrated direct solve of [[H, A^T],[A, 0]] [u; mu] = [rhs; 0]; the
// diagonal scaling keeps the huge-alpha theta block from washing out the
// O(1) length/base rows.
struct SaddleSolution {
    Eigen::VectorXd u;
    Vec2 mu;
};

SaddleSolution solve_saddle(const Eigen::MatrixXd& H, const Eigen::Matrix2Xd& A_theta,
                            const Eigen::VectorXd& rhs) {
    const Eigen::Index np = H.rows();
    const Eigen::Index n = A_theta.cols();
    Eigen::VectorXd s(np);
    for (Eigen::Index i = 0; i < np; ++i)
        s[i] = 1.0 / std::sqrt(std::max(std::abs(H(i, i)), 1e-300));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, np);
    A.leftCols(n) = A_theta;
    Eigen::MatrixXd As = A * s.asDiagonal();
    Eigen::Vector2d s2;
    for (int r = 0; r < 2; ++r) s2[r] = 1.0 / std::max(As.row(r).norm(), 1e-300);

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(np + 2, np + 2);
    K.topLeftCorner(np, np) = s.asDiagonal() * H * s.asDiagonal();
    K.block(0, np, np, 2) = (s2.asDiagonal() * As).transpose();
    K.block(np, 0, 2, np) = s2.asDiagonal() * As;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(np + 2);
    b.head(np) = rhs.cwiseProduct(s);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
    const Eigen::VectorXd sol = lu.solve(b);
    // gate on the actual solve quality; norm-based condition estimates are
    // far too pessimistic for these bordered matrices
    const double rel = (K * sol - b).norm() / std::max(b.norm(), 1e-300);
    if (!std::isfinite(rel) || rel > 1e-8) {
        std::ostringstream os;
        os << "saddle system solve failed (relative residual " << rel << ", rcond estimate "
           << lu.rcond() << "); consider a larger alpha or the gradient-metric mode";
        throw std::runtime_error(os.str());
    }
    SaddleSolution out;
    out.u = sol.head(np).cwiseProduct(s);
    out.mu = Vec2(sol[np] * s2[0], sol[np + 1] * s2[1]);
    return out;
}

struct StepEval {
    GaussNewtonStep step;
    double objective0 = 0.0;
    Eigen::VectorXd gradient;  // of J^alpha at m
};

StepEval eval_gauss_newton(const TikhonovProblem& problem, const ShapePoint& m, double alpha,
                           const SolverSettings& settings, const ConstraintSolver& solver) {
    const int n = m.size();
    const double w = problem.forward->weight();
    auto [value, J] = problem.forward->apply_with_jacobian(m);
    const Eigen::VectorXcd r = value - problem.data;

    PenaltyEval pen = eval_penalty(problem, m, /*with_derivatives=*/true);

    StepEval out;
    out.objective0 = 0.5 * w * r.squaredNorm() + alpha * pen.value;
    out.gradient = w * (J.adjoint() * r).real() + alpha * pen.gradient;

    const Eigen::MatrixXd data_term = w * (J.adjoint() * J).real();
    SaddleSolution sol;
    if (settings.hessian_mode == HessianMode::kGradientMetric) {
        sol = solve_saddle(data_term + alpha * solver.gram(), closure_jacobian(m),
                           -out.gradient);
    } else {
        Eigen::MatrixXd H = data_term;
        H.topLeftCorner(n, n) +=
            alpha * intrinsic_hessian(m, pen.bending_gradient_theta, pen.hessian, solver);
        try {
            sol = solve_saddle(H, closure_jacobian(m), -out.gradient);
        } catch (const std::runtime_error&) {
            // data-term gauge symmetries can make the Gauss-Newton saddle
            // singular; the H^1-metric surrogate keeps it invertible
            // whenever the constraint has full rank
            sol = solve_saddle(data_term + alpha * solver.gram(), closure_jacobian(m),
                               -out.gradient);
            out.step.used_gradient_metric = true;
        }
    }
    out.step.direction = TangentVector::from_ambient(sol.u);
    out.step.multiplier = sol.mu;
    out.step.step_norm_h1 = solver.norm(sol.u);
    const Eigen::VectorXd riesz = solver.riesz_tangent(m, out.gradient);
    out.step.gradient_norm_dual = std::sqrt(std::max(0.0, out.gradient.dot(riesz)));
    return out;
}

struct TrialEval {
    double objective = std::numeric_limits<double>::infinity();
    double residual = 0.0;
    double penalty = 0.0;
};

TrialEval eval_objective(const TikhonovProblem& problem, const ShapePoint& m, double alpha) {
    TrialEval out;
    if (problem.penalty == Penalty::kBendingPlusMobius) {
        // barrier: the vertex-pair Moebius sum alone can stay finite across
        // a clean mid-edge crossing, so gate on simplicity explicitly
        if (!is_simple(reconstruct_polygon(m))) {
            out.penalty = std::numeric_limits<double>::infinity();
            return out;
        }
    }
    out.penalty = penalty_value(problem, m);
    if (!std::isfinite(out.penalty)) return out;
    out.residual = residual_norm(problem, problem.forward->apply(m));
    out.objective = 0.5 * out.residual * out.residual + alpha * out.penalty;
    return out;
}

ShapePoint line_search_impl(const TikhonovProblem& problem, const ShapePoint& m, double alpha,
                            const TangentVector& u, const Eigen::VectorXd& grad, double J0,
                            const SolverSettings& settings, const ConstraintSolver& solver,
                            IterationRecord* record) {
    const double slope = grad.dot(u.ambient());
    double t = 1.0;
    for (int bt = 0; bt <= settings.line_search.max_backtracks; ++bt) {
        ShapePoint trial = m;
        trial.theta += t * u.dtheta;
        trial.length += t * u.dlength;
        trial.base += t * u.dbase;
        bool usable = true;
        try {
            trial = restore_feasibility(trial, solver, settings.feasibility_tol,
                                        settings.feasibility_max_iter, problem.box);
        } catch (const RestoreError&) {
            usable = false;
        } catch (const RankDeficiencyError&) {
            usable = false;
        }
        if (usable && !is_simple(reconstruct_polygon(trial))) usable = false;
        if (usable) {
            TrialEval ev;
            try {
                ev = eval_objective(problem, trial, alpha);
            } catch (const std::exception&) {
                // a trial point the forward operator cannot digest (self
                // intersection, degenerate interpolation, singular system)
                // just shortens the step
                usable = false;
            }
            if (usable &&
                ev.objective <= J0 + settings.line_search.sufficient_decrease * t * slope) {
                if (record) {
                    record->step_size = t;
                    record->objective = ev.objective;
                    record->residual_norm = ev.residual;
                    record->penalty_value = ev.penalty;
                    record->accepted = true;
                }
                return trial;
            }
        }
        t *= settings.line_search.shrink;
    }
    throw StagnationError("line search found no acceptable step");
}

double default_alpha_initial(const TikhonovProblem& problem, const ShapePoint& m0) {
    const double r0 = residual_norm(problem, problem.forward->apply(m0));
    const double rel = bending_energy(m0, &problem.rest).value;
    const double scale = std::max(rel, 1e-8);
    // deliberately enormous when the rest shape is the initial guess: the
    // first stages then move only the penalty-free directions (L, p and
    // rigid rotation), and the halving continuation tracks the solution
    // path from there. A start already at the discrepancy level still
    // needs a positive alpha for its single stage.
    const double r_scale = std::max(r0, problem.noise_level * 1.1);
    const double raw = 0.5 * r_scale * r_scale / scale;
    if (!(raw > 0.0) || !std::isfinite(raw)) return 1.0;
    // snap to a power of two: the halving grid (and so the final alpha)
    // stays put under discretization-level changes of the initial residual
    return std::exp2(std::ceil(std::log2(raw)));
}

}  // namespace

double residual_norm(const TikhonovProblem& problem, const Eigen::VectorXcd& value) {
    return weighted_norm(problem.forward->weight(), value - problem.data);
}

double penalty_value(const TikhonovProblem& problem, const ShapePoint& m) {
    double v = bending_energy(m, &problem.rest).value;
    if (problem.penalty == Penalty::kBendingPlusMobius)
        v += mobius_energy(reconstruct_polygon(m));
    return v;
}

double objective(const TikhonovProblem& problem, const ShapePoint& m, double alpha) {
    return eval_objective(problem, m, alpha).objective;
}

GaussNewtonStep gauss_newton_step(const TikhonovProblem& problem, const ShapePoint& m,
                                  double alpha, const SolverSettings& settings,
                                  const ConstraintSolver& solver) {
    return eval_gauss_newton(problem, m, alpha, settings, solver).step;
}

ShapePoint line_search_and_restore(const TikhonovProblem& problem, const ShapePoint& m,
                                   double alpha, const TangentVector& u,
                                   const SolverSettings& settings, const ConstraintSolver& solver,
                                   IterationRecord* record) {
    if (u.ambient().norm() == 0.0) return m;
    const double w = problem.forward->weight();
    auto [value, J] = problem.forward->apply_with_jacobian(m);
    PenaltyEval pen = eval_penalty(problem, m, /*with_derivatives=*/true);
    const Eigen::VectorXcd r = value - problem.data;
    const Eigen::VectorXd grad = w * (J.adjoint() * r).real() + alpha * pen.gradient;
    const double J0 = 0.5 * w * r.squaredNorm() + alpha * pen.value;
    return line_search_impl(problem, m, alpha, u, grad, J0, settings, solver, record);
}

MinimizeResult minimize_at_alpha(const TikhonovProblem& problem, const ShapePoint& m0,
                                 double alpha, const SolverSettings& settings, RunTrace* trace) {
    ConstraintSolver solver(*m0.partition);
    ShapePoint m = m0;
    MinimizeResult result;
    result.status = MinimizeStatus::kMaxIterations;
    double prev_objective = std::numeric_limits<double>::infinity();
    double last_residual = -1.0;
    int stagnant = 0;

    int it = 0;
    for (; it < settings.max_gn_iters; ++it) {
        StepEval ev = eval_gauss_newton(problem, m, alpha, settings, solver);
        IterationRecord rec;
        rec.alpha = alpha;
        rec.iteration = it;
        rec.step_norm = ev.step.step_norm_h1;
        rec.gradient_norm = ev.step.gradient_norm_dual;

        if (ev.step.step_norm_h1 < settings.gn_tolerance ||
            ev.step.gradient_norm_dual < settings.gn_tolerance) {
            result.status = MinimizeStatus::kConverged;
            break;
        }

        try {
            m = line_search_impl(problem, m, alpha, ev.step.direction, ev.gradient,
                                 ev.objective0, settings, solver, &rec);
        } catch (const StagnationError&) {
            result.status = MinimizeStatus::kStagnated;
            if (trace) trace->iterations.push_back(rec);
            break;
        }
        last_residual = rec.residual_norm;
        if (trace) trace->iterations.push_back(rec);

        if (prev_objective - rec.objective <=
            settings.stagnation_tol * std::max(1.0, std::abs(prev_objective))) {
            if (++stagnant >= 2) {
                result.status = MinimizeStatus::kStagnated;
                ++it;
                break;
            }
        } else {
            stagnant = 0;
        }
        prev_objective = rec.objective;
    }

    result.shape = std::move(m);
    result.iterations = it;
    result.residual_norm = last_residual >= 0.0
                               ? last_residual
                               : residual_norm(problem, problem.forward->apply(result.shape));
    return result;
}

ContinuationResult discrepancy_continuation(const TikhonovProblem& problem, const ShapePoint& m0,
                                            const SolverSettings& settings) {
    ContinuationResult out;
    double alpha = settings.alpha_initial > 0.0 ? settings.alpha_initial
                                                : default_alpha_initial(problem, m0);
    const double alpha_floor = settings.alpha_floor_factor * alpha;
    const double target = settings.discrepancy_factor * problem.noise_level;

    ShapePoint m = m0;
    while (true) {
        MinimizeResult res = minimize_at_alpha(problem, m, alpha, settings, &out.trace);
        m = std::move(res.shape);

        AlphaRecord stage;
        stage.alpha = alpha;
        stage.iterations = res.iterations;
        stage.residual_norm = res.residual_norm;
        stage.penalty_value = penalty_value(problem, m);
        stage.status = res.status == MinimizeStatus::kConverged   ? "converged"
                       : res.status == MinimizeStatus::kStagnated ? "stagnated"
                                                                  : "max_iters";
        stage.shape = m;
        out.trace.stages.push_back(std::move(stage));

        if (res.residual_norm < target) {
            out.status = ContinuationStatus::kDiscrepancyReached;
            break;
        }
        if (alpha * settings.alpha_factor < alpha_floor) {
            out.status = ContinuationStatus::kAlphaFloor;
            break;
        }
        alpha *= settings.alpha_factor;
    }
    out.shape = std::move(m);
    out.alpha_final = alpha;
    out.residual_norm = out.trace.stages.back().residual_norm;
    return out;
}

std::pair<Eigen::VectorXcd, double> add_noise(const Eigen::VectorXcd& y, double weight,
                                              double relative_level, std::uint64_t seed) {
    if (relative_level < 0.0) throw std::invalid_argument("add_noise: negative noise level");
    const double ynorm = weighted_norm(weight, y);
    if (relative_level == 0.0) return {y, 0.0};

    std::mt19937_64 gen(seed);
    auto gaussian_pair = [&gen](double& a, double& b) {
        // Box-Muller on explicit uniform bits; std distributions are not
        // pinned across standard library implementations.
        const double u1 = (static_cast<double>(gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
        const double u2 = static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        a = rad * std::cos(2.0 * 3.141592653589793238462643 * u2);
        b = rad * std::sin(2.0 * 3.141592653589793238462643 * u2);
    };
    Eigen::VectorXcd e(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double a, b;
        gaussian_pair(a, b);
        e[i] = Complex(a, b);
    }
    const double enorm = weighted_norm(weight, e);
    const double delta = relative_level * ynorm;
    e *= delta / enorm;
    return {y + e, delta};
}

std::string RunTrace::to_jsonl() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& it : iterations) {
        os << "{\"alpha\":" << it.alpha << ",\"iter\":" << it.iteration
           << ",\"objective\":" << it.objective << ",\"residual\":" << it.residual_norm
           << ",\"penalty\":" << it.penalty_value << ",\"grad_norm\":" << it.gradient_norm
           << ",\"step_norm\":" << it.step_norm << ",\"step_size\":" << it.step_size
           << ",\"accepted\":" << (it.accepted ? "true" : "false") << "}\n";
    }
    return os.str();
}

}  // namespace elastica
