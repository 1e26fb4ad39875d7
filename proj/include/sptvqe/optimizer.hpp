#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/ansatz.hpp"
#include "sptvqe/spectra.hpp"

namespace sptvqe {

enum class Method { Ngd, Gd };

struct OptimizerConfig {
  double alpha = 0.01;
  int max_iters = 1000;
  /// Tikhonov term added to the metric before the solve.
  double ridge = 1e-6;
  /// Stop once the gradient norm is at or below this value; 0 disables.
  double grad_tol = 0.0;
  /// Gradient norms below this are treated as an exact stationary point. Such
  /// a point is left along the most negative Hessian direction when one
  /// exists, otherwise the run stops.
  double stationary_tol = 1e-12;
  Method method = Method::Ngd;
  /// Central-difference step for SO(4) gate derivatives.
  double fd_step = 1e-5;
  /// Seeded restarts from random parameters; 0 starts once from theta = 0.
  int restarts = 0;
  std::uint64_t seed = 0;

  /// Throws ArgumentError on alpha <= 0, ridge < 0, max_iters < 0 or an
  /// fd_step outside [1e-7, 1e-3].
  void validate() const;
};

struct TraceRecord {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  /// Fraction of the nominal step taken to reach this iterate (1 unless halved).
  double step_scale = 1.0;
  std::vector<double> theta;
};

struct OptimizationTrace {
  std::vector<TraceRecord> records;
  std::vector<double> theta;
  double energy = 0.0;
  /// Stopped at a stationary point with no negative curvature.
  bool stationary = false;
  /// Iterations at which a saddle was left along negative curvature.
  std::vector<int> saddle_escapes;
  /// Iterations where five halvings did not restore descent.
  std::vector<int> raw_steps;
  /// Ridge values above the configured one that were needed by the solve.
  std::vector<double> ridge_escalations;
};

/// Symmetric positive semidefinite real part of the quantum geometric tensor.
using MetricTensor = Eigen::MatrixXd;

/// |Psi(theta + pi e_i)>; half of it is d|Psi>/d theta_i. ESWAP family only.
StateVector shifted_state(const AnsatzSpec& spec, std::span<const double> theta, std::size_t i);

/// dE/dtheta_i = 2 Re <d_i Psi|H|Psi>. ESWAP uses exact derivative states, SO4
/// uses central-difference gate derivatives.
Eigen::VectorXd gradient(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                         const SparseOperator& H, double fd_step = 1e-5);
/// Re(<d_i|d_j> - <d_i|Psi><Psi|d_j>).
MetricTensor metric(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                    double fd_step = 1e-5);

/// Energy, gradient and metric from one set of derivative states.
struct LocalModel {
  double energy = 0.0;
  Eigen::VectorXd grad;
  MetricTensor metric;
};
LocalModel local_model(const DerivativeStates& ds, const SparseOperator& H, bool with_metric);

/// Central differences of E in every parameter, step h in [1e-7, 1e-3].
Eigen::VectorXd gradient_fd(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                            const SparseOperator& H, double h = 1e-5);

/// theta - alpha * delta with (G + ridge I) delta = grad solved by Cholesky.
/// The ridge grows x10 on failure up to 1e-2, then SingularMetricError.
/// `used_ridge`, if given, receives the ridge that succeeded.
std::vector<double> ngd_step(std::span<const double> theta, const Eigen::VectorXd& grad,
                             const MetricTensor& G, const OptimizerConfig& config,
                             double* used_ridge = nullptr);

/// Hessian of E by central differences of the analytic gradient.
Eigen::MatrixXd hessian_fd(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                           const SparseOperator& H, double h = 1e-4, double fd_step = 1e-5);

/// Descent from `theta0` (zeros when empty). One record per evaluated iterate.
OptimizationTrace run_vqe(const AnsatzEvaluator& ansatz, const SparseOperator& H,
                          const OptimizerConfig& config, std::vector<double> theta0 = {});

/// Best of `config.restarts` runs from uniform [0, 2pi) parameters seeded by
/// seed + r; a single run from zeros when restarts == 0.
OptimizationTrace run_vqe_best(const AnsatzEvaluator& ansatz, const SparseOperator& H,
                               const OptimizerConfig& config);

/// Uniform [0, 2pi) parameters from a seeded generator.
std::vector<double> random_parameters(std::size_t count, std::uint64_t seed);

}  // namespace sptvqe
