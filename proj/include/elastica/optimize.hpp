#ifndef ELASTICA_OPTIMIZE_HPP
#define ELASTICA_OPTIMIZE_HPP

#include "elastica/energy.hpp"
#include "elastica/geometry.hpp"
#include "elastica/scatter.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace elastica {

/// Abstraction of the data-misfit operator: the far-field map, the
/// level-line operator, or any synthetic stand-in with the same contract.
/// Data live in C^M with the weighted inner product w * sum conj(u) v.
class ForwardOperator {
  public:
    virtual ~ForwardOperator() = default;
    virtual Eigen::Index dim() const = 0;
    virtual double weight() const = 0;
    virtual Eigen::VectorXcd apply(const ShapePoint& m) const = 0;
    /// Value plus Jacobian over the ambient coordinates (theta, L, p).
    virtual std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> apply_with_jacobian(
        const ShapePoint& m) const = 0;
};

/// Far-field map as a ForwardOperator with column-major stacking.
class ScatterOperator final : public ForwardOperator {
  public:
    explicit ScatterOperator(ScatterConfig config) : config_(std::move(config)) {
        config_.validate();
    }
    const ScatterConfig& config() const { return config_; }
    Eigen::Index dim() const override {
        return static_cast<Eigen::Index>(config_.measurement_dirs.size()) *
               static_cast<Eigen::Index>(config_.incident_dirs.size());
    }
    double weight() const override { return config_.data_weight(); }
    Eigen::VectorXcd apply(const ShapePoint& m) const override {
        return far_field_map(m, config_).stacked();
    }
    std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> apply_with_jacobian(
        const ShapePoint& m) const override {
        FarFieldJacobian fj = far_field_with_jacobian(m, config_);
        return {fj.value.stacked(), std::move(fj.jacobian)};
    }

  private:
    ScatterConfig config_;
};

enum class Penalty { kBending, kBendingPlusMobius };
enum class HessianMode { kGaussNewtonIntrinsic, kGradientMetric };

struct TikhonovProblem {
    const ForwardOperator* forward = nullptr;
    Eigen::VectorXcd data;
    double noise_level = 0.0;
    ShapePoint rest;
    Penalty penalty = Penalty::kBending;
    BoxConstraints box = BoxConstraints::unbounded();
};

struct LineSearchSettings {
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    int max_backtracks = 30;
};

struct SolverSettings {
    double gn_tolerance = 1e-5;
    double alpha_initial = 0.0;  // 0: balanced default, snapped to a power of two
    double alpha_factor = 0.5;
    double discrepancy_factor = 1.1;
    double alpha_floor_factor = 1e-14;  // times alpha_initial
    int max_gn_iters = 30;
    LineSearchSettings line_search;
    HessianMode hessian_mode = HessianMode::kGaussNewtonIntrinsic;
    double feasibility_tol = 1e-10;
    int feasibility_max_iter = 20;
    double stagnation_tol = 1e-11;  // relative objective decrease considered progress
};

struct IterationRecord {
    double alpha = 0.0;
    int iteration = 0;
    double objective = 0.0;
    double residual_norm = 0.0;
    double penalty_value = 0.0;
    double gradient_norm = 0.0;
    double step_norm = 0.0;
    double step_size = 0.0;
    bool accepted = false;
};

struct AlphaRecord {
    double alpha = 0.0;
    int iterations = 0;
    double residual_norm = 0.0;
    double penalty_value = 0.0;
    double gradient_norm = 0.0;
    std::string status;  // converged | stagnated | max_iters
    ShapePoint shape;
};

struct RunTrace {
    std::vector<IterationRecord> iterations;
    std::vector<AlphaRecord> stages;
    std::string to_jsonl() const;
};

enum class MinimizeStatus { kConverged, kStagnated, kMaxIterations };
enum class ContinuationStatus { kDiscrepancyReached, kAlphaFloor };

struct GaussNewtonStep {
    TangentVector direction;
    Vec2 multiplier;
    double step_norm_h1 = 0.0;        // ||u|| in the G_X norm
    double gradient_norm_dual = 0.0;  // projected gradient in the dual norm
    bool used_gradient_metric = false;  // fallback taken on a singular saddle
};

struct MinimizeResult {
    ShapePoint shape;
    MinimizeStatus status = MinimizeStatus::kConverged;
    int iterations = 0;
    double residual_norm = 0.0;
};

struct ContinuationResult {
    ShapePoint shape;
    double alpha_final = 0.0;
    ContinuationStatus status = ContinuationStatus::kDiscrepancyReached;
    double residual_norm = 0.0;
    RunTrace trace;
};

struct StagnationError : std::runtime_error {
    explicit StagnationError(const std::string& what) : std::runtime_error(what) {}
};

/// Residual norm ||F(m) - y|| in the weighted data norm.
double residual_norm(const TikhonovProblem& problem, const Eigen::VectorXcd& value);

/// Penalty value (bending, optionally plus the Moebius barrier).
double penalty_value(const TikhonovProblem& problem, const ShapePoint& m);

/// J^alpha(m) = 1/2 ||F(m)-y||^2 + alpha * penalty. +infinity acts as the
/// self-intersection barrier when the Moebius term is selected.
double objective(const TikhonovProblem& problem, const ShapePoint& m, double alpha);

/// One constrained Gauss-Newton direction from the bordered saddle system.
GaussNewtonStep gauss_newton_step(const TikhonovProblem& problem, const ShapePoint& m,
                                  double alpha, const SolverSettings& settings,
                                  const ConstraintSolver& solver);

/// Backtracking line search with feasibility restoration; throws
/// StagnationError when no acceptable step exists.
ShapePoint line_search_and_restore(const TikhonovProblem& problem, const ShapePoint& m,
                                   double alpha, const TangentVector& u,
                                   const SolverSettings& settings, const ConstraintSolver& solver,
                                   IterationRecord* record = nullptr);

MinimizeResult minimize_at_alpha(const TikhonovProblem& problem, const ShapePoint& m0,
                                 double alpha, const SolverSettings& settings,
                                 RunTrace* trace = nullptr);

ContinuationResult discrepancy_continuation(const TikhonovProblem& problem, const ShapePoint& m0,
                                            const SolverSettings& settings);

/// Centered Gaussian noise, rescaled so the relative data-norm error is
/// exactly `relative_level`. Returns the noisy data and delta.
std::pair<Eigen::VectorXcd, double> add_noise(const Eigen::VectorXcd& y, double weight,
                                              double relative_level, std::uint64_t seed);

}  // namespace elastica

#endif
