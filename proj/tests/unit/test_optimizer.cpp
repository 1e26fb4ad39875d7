#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sptvqe/ansatz.hpp"
#include "sptvqe/errors.hpp"
#include "sptvqe/observables.hpp"
#include "sptvqe/optimizer.hpp"
#include "sptvqe/spectra.hpp"

using namespace sptvqe;
using std::numbers::pi;

TEST_SUITE("optimizer") {
  TEST_CASE("config validation") {
    OptimizerConfig c;
    CHECK_NOTHROW(c.validate());
    c.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.ridge = -1.0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = {};
    c.fd_step = 1e-2;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
  }

  TEST_CASE("shifted states") {
    const AnsatzSpec spec{8, InitKind::S, 2, Family::Eswap};
    const auto theta = oracle::random_angles(spec.parameter_count(), 1);
    const StateVector psi = evaluate(spec, theta);
    for (std::size_t i : {std::size_t{0}, std::size_t{6}, std::size_t{13}}) {
      const StateVector once = shifted_state(spec, theta, i);
      CHECK(std::abs(inner_product(once, psi)) <= 1.0 + 1e-12);
      auto shifted = theta;
      shifted[i] += pi;
      const StateVector twice = shifted_state(spec, shifted, i);
      CHECK(std::abs(std::abs(inner_product(twice, psi)) - 1.0) < 1e-12);
      const double h = 1e-5;
      auto tp = theta, tm = theta;
      tp[i] += h;
      tm[i] -= h;
      const oracle::Vec fd = (oracle::to_vec(evaluate(spec, tp)) - oracle::to_vec(evaluate(spec, tm))) / (2 * h);
      CHECK((fd - 0.5 * oracle::to_vec(once)).norm() < 1e-6);
    }
    CHECK_THROWS_AS(shifted_state({8, InitKind::S, 1, Family::So4}, std::vector<double>(42), 0), UnsupportedError);
  }

  TEST_CASE("gradient against finite differences") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.3, Boundary::Open});
    for (unsigned seed = 0; seed < 5; ++seed) {
      const AnsatzEvaluator ev({8, seed % 2 ? InitKind::E01 : InitKind::S, 2, Family::Eswap});
      const auto theta = oracle::random_angles(ev.parameter_count(), 40 + seed);
      const Eigen::VectorXd g = gradient(ev, theta, H);
      const Eigen::VectorXd fd = gradient_fd(ev, theta, H, 1e-5);
      CHECK((g - fd).cwiseAbs().maxCoeff() < 1e-6);
      const Eigen::VectorXd fd4 = gradient_fd(ev, theta, H, 1e-4);
      CHECK((fd4 - fd).cwiseAbs().maxCoeff() < 1e-5);
    }
    const AnsatzEvaluator so4({8, InitKind::S, 1, Family::So4});
    const auto theta = oracle::random_angles(so4.parameter_count(), 3);
    CHECK((gradient(so4, theta, H) - gradient_fd(so4, theta, H)).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("exact eigenstates are stationary") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.0, Boundary::Open});
    const AnsatzEvaluator ev({8, InitKind::S, 2, Family::Eswap});
    const std::vector<double> zero(ev.parameter_count(), 0.0);
    CHECK(gradient(ev, zero, H).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(gradient_fd(ev, zero, H).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("a brick outside the Hamiltonian support has zero gradient") {
    // Only the (2,3) bond is coupled; parameter 0 acts on (0,1) in the first
    // sub-layer and never reaches sites 2, 3 at D = 1.
    const SparseOperator H(8, {Bond{2, 3, 1.0}});
    const AnsatzEvaluator ev({8, InitKind::D, 1, Family::Eswap});
    const auto theta = oracle::random_angles(ev.parameter_count(), 9);
    // Brick order for D starts with the odd pairs; the (0,1) brick is slot 3.
    CHECK(std::abs(gradient(ev, theta, H)(3)) < 1e-12);
  }

  TEST_CASE("metric tensor") {
    for (unsigned seed = 0; seed < 4; ++seed) {
      const AnsatzEvaluator ev({8, InitKind::S, 2, Family::Eswap});
      const auto theta = oracle::random_angles(ev.parameter_count(), 60 + seed);
      const MetricTensor G = metric(ev, theta);
      CHECK((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      CHECK(es.eigenvalues().minCoeff() > -1e-8);
      const StateVector psi = ev.state(theta);
      for (Eigen::Index i = 0; i < G.rows(); ++i) {
        CHECK(G(i, i) >= -1e-14);
        CHECK(G(i, i) <= 0.25 + 1e-12);
        const double ov = std::abs(inner_product(shifted_state(ev.spec(), theta, static_cast<std::size_t>(i)), psi));
        CHECK(G(i, i) == doctest::Approx(0.25 * (1.0 - ov * ov)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("NGD step") {
    OptimizerConfig c;
    c.ridge = 0.0;
    const std::vector<double> theta{0.5, -1.0, 2.0};
    const Eigen::VectorXd grad = Eigen::Vector3d(1.0, 2.0, -3.0);
    const auto next = ngd_step(theta, grad, Eigen::MatrixXd::Identity(3, 3), c);
    for (std::size_t i = 0; i < 3; ++i) CHECK(next[i] == doctest::Approx(theta[i] - 0.01 * grad(static_cast<Eigen::Index>(i))));
    const auto same = ngd_step(theta, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Random(3, 3), c);
    CHECK(same == theta);
    // A singular metric needs the ridge to grow.
    double used = 0.0;
    c.ridge = 0.0;
    ngd_step(theta, grad, Eigen::MatrixXd::Zero(3, 3), c, &used);
    CHECK(used > 0.0);
    CHECK(used <= 1e-2);
    Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(ngd_step(theta, grad, negative, c), SingularMetricError);
  }

  TEST_CASE("fixed point converges at iteration zero") {
    for (int D : {1, 2}) {
      const SparseOperator H = build_hamiltonian({8, 1.0, 0.0, Boundary::Open});
      const AnsatzEvaluator ev({8, InitKind::S, D, Family::Eswap});
      const OptimizationTrace t = run_vqe(ev, H, {});
      CHECK(t.stationary);
      CHECK(t.records.size() == 1);
      CHECK(t.energy == doctest::Approx(-2.25).epsilon(1e-14));
    }
  }

  TEST_CASE("VQE descends, conserves S^z and stays above E0") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.3, Boundary::Open});
    const double e0 = eigensolve(H).pairs[0].energy;
    for (InitKind k : {InitKind::S, InitKind::E00}) {
      const AnsatzEvaluator ev({8, k, 1, Family::Eswap});
      OptimizerConfig c;
      c.max_iters = 200;
      const OptimizationTrace t = run_vqe(ev, H, c);
      CHECK(t.records.size() <= 201);
      CHECK(t.energy <= t.records.front().energy + 1e-9);
      CHECK(t.energy >= e0 - 1e-9);
      const double sz0 = total_sz(ev.initial_state());
      for (std::size_t r = 0; r < t.records.size(); ++r) {
        if (r > 0 && std::find(t.raw_steps.begin(), t.raw_steps.end(), t.records[r].iteration) == t.raw_steps.end()) {
          CHECK(t.records[r].energy <= t.records[r - 1].energy + 1e-9);
        }
        if (r % 50 == 0) CHECK(std::abs(total_sz(ev.state(t.records[r].theta)) - sz0) < 1e-10);
      }
    }
  }

  TEST_CASE("zero start leaves the saddle along negative curvature") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.1, Boundary::Open});
    const AnsatzEvaluator ev({8, InitKind::S, 1, Family::Eswap});
    const std::vector<double> zero(ev.parameter_count(), 0.0);
    CHECK(gradient(ev, zero, H).norm() < 1e-12);
    const Eigen::MatrixXd hess = hessian_fd(ev, zero, H);
    CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() < 1e-6);
    OptimizerConfig c;
    c.max_iters = 300;
    const OptimizationTrace t = run_vqe(ev, H, c);
    CHECK_FALSE(t.saddle_escapes.empty());
    CHECK(t.energy < t.records.front().energy - 1e-3);
    const double e0 = eigensolve(H).pairs[0].energy;
    CHECK((t.energy - e0) / 8 < 1e-3);
  }

  TEST_CASE("restarts are deterministic and SO(4) optimizes") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.1, Boundary::Open});
    const AnsatzEvaluator ev({8, InitKind::S, 1, Family::So4});
    OptimizerConfig c;
    c.max_iters = 60;
    c.restarts = 2;
    c.seed = 5;
    const OptimizationTrace a = run_vqe_best(ev, H, c);
    const OptimizationTrace b = run_vqe_best(ev, H, c);
    CHECK(a.energy == b.energy);
    CHECK(a.theta == b.theta);
    CHECK(a.energy < a.records.front().energy);
    CHECK(random_parameters(4, 1) == random_parameters(4, 1));
    for (double t : random_parameters(100, 3)) {
      CHECK(t >= 0.0);
      CHECK(t < 2 * pi);
    }
  }
}
