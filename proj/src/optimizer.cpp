#include "sptvqe/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/observables.hpp"

namespace sptvqe {

namespace {

constexpr double kMaxRidge = 1e-2;
constexpr int kMaxHalvings = 5;
constexpr double kDescentTol = 1e-9;
constexpr double kNegativeCurvature = -1e-6;

void check_fd_step(double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) {
    throw ArgumentError("finite-difference step " + std::to_string(h) + " outside [1e-7, 1e-3]");
  }
}

Eigen::Map<const Eigen::VectorXcd> as_vector(const StateVector& s) {
  return {s.amplitudes().data(), static_cast<Eigen::Index>(s.dim())};
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be > 0");
  if (!(ridge >= 0.0)) throw ArgumentError("ridge must be >= 0");
  if (max_iters < 0) throw ArgumentError("max_iters must be >= 0");
  if (!(grad_tol >= 0.0)) throw ArgumentError("grad_tol must be >= 0");
  if (restarts < 0) throw ArgumentError("restarts must be >= 0");
  check_fd_step(fd_step);
}

StateVector shifted_state(const AnsatzSpec& spec, std::span<const double> theta, std::size_t i) {
  if (spec.family != Family::Eswap) {
    throw UnsupportedError("parameter shift needs generators with eigenvalues +-1; use gradient_fd");
  }
  if (i >= spec.parameter_count()) throw IndexError("parameter index out of range");
  std::vector<double> shifted(theta.begin(), theta.end());
  if (shifted.size() != spec.parameter_count()) throw ShapeError("parameter vector length mismatch");
  shifted[i] += std::numbers::pi;
  return evaluate(spec, shifted);
}

namespace {

MetricTensor metric_from(const DerivativeStates& ds) {
  const auto psi = as_vector(ds.psi);
  const Eigen::MatrixXd dr = ds.d.real();
  const Eigen::MatrixXd di = ds.d.imag();
  const Eigen::VectorXcd v = ds.d.adjoint() * psi;
  const Eigen::VectorXd vr = v.real();
  const Eigen::VectorXd vi = v.imag();
  const auto p = ds.d.cols();
  // Re(d^H d) - Re(v v^H) with v = d^H psi, assembled on the lower triangle
  MetricTensor g = MetricTensor::Zero(p, p);
  g.selfadjointView<Eigen::Lower>().rankUpdate(dr.transpose());
  g.selfadjointView<Eigen::Lower>().rankUpdate(di.transpose());
  g.selfadjointView<Eigen::Lower>().rankUpdate(vr, -1.0);
  g.selfadjointView<Eigen::Lower>().rankUpdate(vi, -1.0);
  return g.selfadjointView<Eigen::Lower>();
}

}  // namespace

LocalModel local_model(const DerivativeStates& ds, const SparseOperator& H, bool with_metric) {
  const StateVector hpsi_state = H.apply(ds.psi);
  const auto psi = as_vector(ds.psi);
  const auto hpsi = as_vector(hpsi_state);
  LocalModel m;
  m.energy = psi.dot(hpsi).real();
  m.grad = 2.0 * (ds.d.adjoint() * hpsi).real();
  if (with_metric) m.metric = metric_from(ds);
  return m;
}

Eigen::VectorXd gradient(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                         const SparseOperator& H, double fd_step) {
  return local_model(ansatz.derivatives(theta, fd_step), H, false).grad;
}

MetricTensor metric(const AnsatzEvaluator& ansatz, std::span<const double> theta, double fd_step) {
  return metric_from(ansatz.derivatives(theta, fd_step));
}

Eigen::VectorXd gradient_fd(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                            const SparseOperator& H, double h) {
  check_fd_step(h);
  std::vector<double> t(theta.begin(), theta.end());
  Eigen::VectorXd g(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = theta[i] + h;
    const double plus = energy(ansatz.state(t), H);
    t[i] = theta[i] - h;
    const double minus = energy(ansatz.state(t), H);
    t[i] = theta[i];
    g(static_cast<Eigen::Index>(i)) = (plus - minus) / (2.0 * h);
  }
  return g;
}

std::vector<double> ngd_step(std::span<const double> theta, const Eigen::VectorXd& grad,
                             const MetricTensor& G, const OptimizerConfig& config,
                             double* used_ridge) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  if (grad.size() != n || G.rows() != n || G.cols() != n) throw ShapeError("NGD operand shapes disagree");
  std::vector<double> out(theta.begin(), theta.end());
  if (used_ridge != nullptr) *used_ridge = config.ridge;
  if (n == 0 || grad.isZero(0.0)) return out;
  double ridge = config.ridge;
  while (true) {
    const Eigen::MatrixXd a = G + ridge * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd delta = llt.solve(grad);
      if (delta.allFinite()) {
        for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] -= config.alpha * delta(i);
        if (used_ridge != nullptr) *used_ridge = ridge;
        return out;
      }
    }
    ridge = ridge == 0.0 ? 1e-6 : ridge * 10.0;
    if (ridge > kMaxRidge * (1.0 + 1e-12)) {
      throw SingularMetricError("metric solve failed with ridge up to 1e-2");
    }
  }
}

Eigen::MatrixXd hessian_fd(const AnsatzEvaluator& ansatz, std::span<const double> theta,
                           const SparseOperator& H, double h, double fd_step) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  std::vector<double> t(theta.begin(), theta.end());
  Eigen::MatrixXd hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    t[k] = theta[k] + h;
    const Eigen::VectorXd plus = gradient(ansatz, t, H, fd_step);
    t[k] = theta[k] - h;
    const Eigen::VectorXd minus = gradient(ansatz, t, H, fd_step);
    t[k] = theta[k];
    hess.col(i) = (plus - minus) / (2.0 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

namespace {

/// Best point along the most negative Hessian direction, or nothing when the
/// curvature is non-negative. E(theta) = E(-theta) for real initial states,
/// so theta = 0 is always stationary and typically a saddle.
std::optional<std::vector<double>> escape_saddle(const AnsatzEvaluator& ansatz,
                                                 const SparseOperator& H,
                                                 const std::vector<double>& theta,
                                                 double e0, const OptimizerConfig& config) {
  if (theta.empty()) return std::nullopt;
  const Eigen::MatrixXd hess = hessian_fd(ansatz, theta, H, 1e-4, config.fd_step);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  if (es.eigenvalues()(0) >= kNegativeCurvature) return std::nullopt;
  Eigen::VectorXd v = es.eigenvectors().col(0);
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  if (v(lead) < 0) v = -v;
  std::optional<std::vector<double>> best;
  double best_e = e0;
  for (int k = 0; k <= 10; ++k) {
    const double step = 0.5 * std::ldexp(1.0, -k);
    std::vector<double> trial = theta;
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * v(static_cast<Eigen::Index>(i));
    const double e = energy(ansatz.state(trial), H);
    if (e < best_e) {
      best_e = e;
      best = std::move(trial);
    }
  }
  return best;
}

}  // namespace

OptimizationTrace run_vqe(const AnsatzEvaluator& ansatz, const SparseOperator& H,
                          const OptimizerConfig& config, std::vector<double> theta0) {
  config.validate();
  const std::size_t n = ansatz.parameter_count();
  if (theta0.empty()) theta0.assign(n, 0.0);
  if (theta0.size() != n) throw ShapeError("initial parameter vector length mismatch");
  if (ansatz.spec().L != H.n_qubits()) throw ShapeError("ansatz width does not match Hamiltonian");

  OptimizationTrace trace;
  std::vector<double> theta = std::move(theta0);
  const bool natural = config.method == Method::Ngd;
  double step_scale = 1.0;
  for (int it = 0;; ++it) {
    const LocalModel m = local_model(ansatz.derivatives(theta, config.fd_step), H, natural);
    if (!std::isfinite(m.energy) || !m.grad.allFinite()) {
      throw ConvergenceError("non-finite energy or gradient at iteration " + std::to_string(it),
                             INFINITY);
    }
    const double gnorm = m.grad.norm();
    trace.records.push_back({it, m.energy, gnorm, step_scale, theta});
    if (it == config.max_iters) break;
    if (gnorm < config.stationary_tol) {
      auto escaped = escape_saddle(ansatz, H, theta, m.energy, config);
      if (!escaped) {
        trace.stationary = true;
        break;
      }
      trace.saddle_escapes.push_back(it);
      theta = std::move(*escaped);
      step_scale = 1.0;
      continue;
    }
    if (config.grad_tol > 0.0 && gnorm <= config.grad_tol) break;

    std::vector<double> full;
    if (natural) {
      double used = config.ridge;
      full = ngd_step(theta, m.grad, m.metric, config, &used);
      if (used != config.ridge) trace.ridge_escalations.push_back(used);
    } else {
      full = theta;
      for (std::size_t i = 0; i < n; ++i) full[i] -= config.alpha * m.grad(static_cast<Eigen::Index>(i));
    }
    // Halve the step while the energy rises.
    step_scale = 1.0;
    std::vector<double> trial = full;
    int halvings = 0;
    while (energy(ansatz.state(trial), H) > m.energy + kDescentTol) {
      if (halvings == kMaxHalvings) {
        trial = full;
        step_scale = 1.0;
        trace.raw_steps.push_back(it);
        break;
      }
      ++halvings;
      step_scale *= 0.5;
      for (std::size_t i = 0; i < n; ++i) trial[i] = theta[i] + step_scale * (full[i] - theta[i]);
    }
    theta = std::move(trial);
  }
  trace.theta = trace.records.back().theta;
  trace.energy = trace.records.back().energy;
  return trace;
}

std::vector<double> random_parameters(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(count);
  for (auto& v : out) v = dist(rng);
  return out;
}

OptimizationTrace run_vqe_best(const AnsatzEvaluator& ansatz, const SparseOperator& H,
                               const OptimizerConfig& config) {
  if (config.restarts == 0) return run_vqe(ansatz, H, config);
  OptimizationTrace best;
  for (int r = 0; r < config.restarts; ++r) {
    OptimizationTrace t = run_vqe(ansatz, H, config,
                                  random_parameters(ansatz.parameter_count(),
                                                    config.seed + static_cast<std::uint64_t>(r)));
    if (r == 0 || t.energy < best.energy) best = std::move(t);
  }
  return best;
}

}  // namespace sptvqe
