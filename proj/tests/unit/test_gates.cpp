#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sptvqe/circuit.hpp"
#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"

using namespace sptvqe;
using std::numbers::pi;

namespace {

oracle::Mat swap_oracle() {
  oracle::Mat p = oracle::Mat::Zero(4, 4);
  p(0, 0) = p(3, 3) = p(1, 2) = p(2, 1) = 1.0;
  return p;
}

/// exp(-i theta P / 2) via the eigendecomposition of P, independent of the constructor.
oracle::Mat eswap_oracle(double theta) {
  const oracle::Mat p = swap_oracle();
  const oracle::Mat sym = 0.5 * (oracle::Mat::Identity(4, 4) + p);
  const oracle::Mat anti = 0.5 * (oracle::Mat::Identity(4, 4) - p);
  return std::exp(Complex(0, -theta / 2)) * sym + std::exp(Complex(0, theta / 2)) * anti;
}

}  // namespace

TEST_SUITE("gates") {
  TEST_CASE("every constructor is unitary") {
    for (const GateMatrix& g : {gates::x(), gates::y(), gates::z(), gates::h(), gates::rx(0.3),
                                gates::rz(-1.2), gates::phase(0.4), gates::cx(), gates::swap(),
                                gates::eswap(2.1), gates::diag(Complex(0, 1), Complex(0, -1))}) {
      CHECK(g.is_unitary(1e-12));
    }
    CHECK_THROWS_AS(GateMatrix({1.0, 0.0, 0.0}), ShapeError);
  }

  TEST_CASE("eswap closed forms") {
    CHECK(gates::eswap(0.0).max_abs_diff(GateMatrix::identity(4)) < 1e-15);
    CHECK(gates::eswap(pi).max_abs_diff(gates::swap() * Complex(0, -1)) < 1e-15);
    const GateMatrix half = (GateMatrix::identity(4) - gates::swap() * Complex(0, 1)) * (1.0 / std::sqrt(2.0));
    CHECK(gates::eswap(pi / 2).max_abs_diff(half) < 1e-15);
    for (double t : oracle::random_angles(10, 4)) {
      CHECK((gates::to_eigen(gates::eswap(t)) - eswap_oracle(t)).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(gates::eswap(t).max_abs_diff(gates::eswap(t).qubit_swapped()) < 1e-15);
    }
  }

  TEST_CASE("eswap is a one-parameter group and conserves S^z") {
    const oracle::Mat sz = 0.5 * (oracle::dense(oracle::site_op(2, 0, oracle::pauli('Z'))) +
                                  oracle::dense(oracle::site_op(2, 1, oracle::pauli('Z'))));
    const auto ang = oracle::random_angles(20, 5);
    for (std::size_t k = 0; k + 1 < ang.size(); k += 2) {
      const GateMatrix prod = gates::eswap(ang[k]) * gates::eswap(ang[k + 1]);
      CHECK(prod.max_abs_diff(gates::eswap(ang[k] + ang[k + 1])) < 1e-12);
      const oracle::Mat u = gates::to_eigen(gates::eswap(ang[k]));
      CHECK((u * sz - sz * u).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("three-CNOT eswap decomposition is phase-equivalent") {
    CHECK(gates::phase_aligned_deviation(circuit_unitary(gates::eswap_decomposed(0.0)),
                                         oracle::Mat::Identity(4, 4)) < 1e-12);
    std::vector<double> thetas = oracle::random_angles(100, 6);
    thetas.push_back(pi / 2);
    thetas.push_back(pi);
    for (double t : thetas) {
      const Circuit c = gates::eswap_decomposed(t);
      CHECK(c.two_qubit_gate_count() == 3);
      CHECK(c.size() == 11);
      CHECK(gates::phase_aligned_deviation(circuit_unitary(c), eswap_oracle(t)) < 1e-12);
    }
  }

  TEST_CASE("singlet preparation") {
    const StateVector s = apply_circuit(new_zero_state(2), gates::singlet_prep());
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(std::abs(s[3]) < 1e-15);
    CHECK(std::abs(s[2] - 1.0 / std::sqrt(2.0)) < 1e-15);   // qubit 1 up-flipped: |0>_0 |1>_1
    CHECK(std::abs(s[1] + 1.0 / std::sqrt(2.0)) < 1e-15);   // |1>_0 |0>_1
    const oracle::Vec v = oracle::to_vec(s);
    const Complex ss = v.dot(oracle::heisenberg_bond(2, 0, 1) * v);
    CHECK(std::abs(ss - (-0.75)) < 1e-14);
    const oracle::Mat u = circuit_unitary(gates::singlet_prep());
    CHECK((u.adjoint() * u - oracle::Mat::Identity(4, 4)).norm() < 1e-12);
  }

  TEST_CASE("global flip") {
    CHECK((circuit_unitary(gates::global_flip(1)) - oracle::pauli('X')).norm() < 1e-15);
    const oracle::Mat u = circuit_unitary(gates::global_flip(4));
    CHECK((u * u - oracle::Mat::Identity(16, 16)).norm() < 1e-15);
  }

  TEST_CASE("SO(4) rotation") {
    CHECK(gates::so4_gate({}).max_abs_diff(GateMatrix::identity(4)) < 1e-15);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::array<double, 6> a{};
      for (auto& x : a) x = u(rng);
      const Eigen::Matrix4d v = gates::so4_matrix(a);
      CHECK((v.transpose() * v - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(v.determinant() - 1.0) < 1e-12);
      const GateMatrix g = gates::so4_gate({a});
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(g(r, c).imag()) == 0.0);
    }
    StateVector psi = new_zero_state(3);
    psi = apply_gate(std::move(psi), gates::h(), {1});
    psi = apply_gate(std::move(psi), gates::so4_gate({{0.3, 1.0, -0.2, 0.4, 0.8, -1.5}}), {1, 2});
    for (Complex a : psi.amplitudes()) CHECK(a.imag() == 0.0);
    CHECK_THROWS_AS(gates::so4_gate({{std::nan(""), 0, 0, 0, 0, 0}}), ArgumentError);
  }

  TEST_CASE("phase alignment ignores the global phase only") {
    const oracle::Mat a = eswap_oracle(0.4);
    CHECK(gates::phase_aligned_deviation(a, std::exp(Complex(0, 1.1)) * a) < 1e-15);
    CHECK(gates::phase_aligned_deviation(a, eswap_oracle(0.5)) > 1e-3);
  }
}
