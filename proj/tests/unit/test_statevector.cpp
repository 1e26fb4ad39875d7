#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sptvqe/circuit.hpp"
#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"
#include "sptvqe/kernels.hpp"
#include "sptvqe/statevector.hpp"

using namespace sptvqe;

TEST_SUITE("statevector") {
  TEST_CASE("zero state") {
    const StateVector s1 = new_zero_state(1);
    CHECK(s1.dim() == 2);
    CHECK(s1[0] == Complex(1.0));
    CHECK(s1[1] == Complex(0.0));
    const StateVector s4 = new_zero_state(4);
    CHECK(s4.norm() == doctest::Approx(1.0));
    CHECK(s4[0] == Complex(1.0));
    CHECK_THROWS_AS(new_zero_state(0), SizeError);
    CHECK_THROWS_AS(new_zero_state(25), SizeError);
    CHECK_THROWS_AS(StateVector(2, std::vector<Complex>(3)), ShapeError);
  }

  TEST_CASE("single and two qubit examples") {
    StateVector s = apply_gate(new_zero_state(2), gates::x(), {0});
    CHECK(std::abs(s[1] - 1.0) < 1e-15);
    const StateVector h = apply_gate(new_zero_state(1), gates::h(), {0});
    CHECK(std::abs(h[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(h[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    s = apply_gate(std::move(s), gates::cx(), {0, 1});
    CHECK(std::abs(s[3] - 1.0) < 1e-15);
  }

  TEST_CASE("target validation") {
    CHECK_THROWS_AS(apply_gate(new_zero_state(2), gates::cx(), {0, 0}), IndexError);
    CHECK_THROWS_AS(apply_gate(new_zero_state(2), gates::x(), {2}), IndexError);
    CHECK_THROWS_AS(apply_gate(new_zero_state(2), gates::x(), {-1}), IndexError);
    CHECK_THROWS_AS(apply_gate(new_zero_state(2), gates::cx(), {0}), ShapeError);
    GateMatrix bad = gates::x();
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(apply_gate(new_zero_state(2), bad, {0}), ValidationError);
  }

  TEST_CASE("two-qubit embedding matches the Kronecker oracle") {
    const int n = 5;
    const StateVector psi = oracle::random_state(n, 11);
    GateMatrix g = gates::eswap(0.7) * gates::cx();
    g = g * gates::so4_gate({{0.1, -0.4, 0.9, 0.3, 1.2, -0.8}});
    for (auto [a, b] : {std::pair{0, 3}, std::pair{4, 1}, std::pair{2, 3}}) {
      // Dense oracle: permute into a basis where the targets are sites 0 and 1.
      oracle::Mat full = oracle::Mat::Zero(1 << n, 1 << n);
      for (int x = 0; x < (1 << n); ++x) {
        const int la = (x >> a) & 1, lb = (x >> b) & 1;
        for (int r = 0; r < 4; ++r) {
          int y = x & ~(1 << a) & ~(1 << b);
          y |= (r & 1) << a;
          y |= ((r >> 1) & 1) << b;
          full(y, x) += g(r, la + 2 * lb);
        }
      }
      const oracle::Vec expect = full * oracle::to_vec(psi);
      const StateVector got = apply_gate(psi, g, {a, b});
      CHECK((oracle::to_vec(got) - expect).norm() < 1e-13);
      const StateVector swapped = apply_gate(psi, g.qubit_swapped(), {b, a});
      CHECK((oracle::to_vec(swapped) - expect).norm() < 1e-13);
      CHECK(got.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("serial and OpenMP kernels agree bitwise on gates") {
    const StateVector psi = oracle::random_state(14, 3);
    const Mat4 m = gates::so4_gate({{0.3, 0.2, -0.1, 0.5, 0.7, -1.1}}).mat4();
    std::vector<Complex> a(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<Complex> b = a;
    kernels::serial::apply_2q(a, 3, 11, m);
    kernels::omp::apply_2q(b, 3, 11, m);
    CHECK(a == b);
    kernels::serial::apply_eswap(a, 12, 2, 0.9);
    kernels::omp::apply_eswap(b, 12, 2, 0.9);
    CHECK(a == b);
    kernels::serial::apply_1q(a, 7, gates::h().mat2());
    kernels::omp::apply_1q(b, 7, gates::h().mat2());
    CHECK(a == b);
    const Complex ip_s = kernels::serial::inner_product(a, psi.amplitudes());
    const Complex ip_o = kernels::omp::inner_product(a, psi.amplitudes());
    CHECK(std::abs(ip_s - ip_o) < 1e-12);
  }

  TEST_CASE("inner product") {
    const StateVector psi = oracle::random_state(4, 5);
    CHECK(std::abs(inner_product(psi, psi) - 1.0) < 1e-12);
    const StateVector x0 = apply_gate(new_zero_state(1), gates::x(), {0});
    CHECK(std::abs(inner_product(new_zero_state(1), x0)) < 1e-15);
    const StateVector s = apply_circuit(new_zero_state(2), gates::singlet_prep());
    CHECK(std::abs(inner_product(s, s) - 1.0) < 1e-14);
    CHECK_THROWS_AS(inner_product(new_zero_state(2), new_zero_state(3)), ShapeError);
    // Conjugate-linear in the first argument.
    StateVector b = psi;
    b *= Complex(0, 1);
    CHECK(std::abs(inner_product(psi, b) - Complex(0, 1)) < 1e-12);
  }

  TEST_CASE("partial trace") {
    const DensityMatrix r0 = partial_trace(new_zero_state(2), {0});
    CHECK(std::abs(r0.elements(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r0.elements(1, 1)) < 1e-15);
    const StateVector s = apply_circuit(new_zero_state(2), gates::singlet_prep());
    const DensityMatrix rs = partial_trace(s, {0});
    CHECK(std::abs(rs.elements(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rs.elements(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(rs.elements(0, 1)) < 1e-15);
    CHECK_THROWS_AS(partial_trace(s, std::vector<int>{}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(s, {0, 1}), ArgumentError);

    // Dense oracle: reshape and contract for a random state and a scattered cut.
    const int n = 5;
    const StateVector psi = oracle::random_state(n, 9);
    const std::vector<int> keep{1, 3};
    const DensityMatrix rho = partial_trace(psi, keep);
    Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
    for (int x = 0; x < (1 << n); ++x) {
      for (int y = 0; y < (1 << n); ++y) {
        if ((x & 0b10101) != (y & 0b10101)) continue;
        const int r = ((x >> 1) & 1) + 2 * ((x >> 3) & 1);
        const int c = ((y >> 1) & 1) + 2 * ((y >> 3) & 1);
        expect(r, c) += psi[static_cast<Index>(x)] * std::conj(psi[static_cast<Index>(y)]);
      }
    }
    CHECK((rho.elements - expect).norm() < 1e-14);
    CHECK(rho.is_hermitian());
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    for (double ev : rho.eigenvalues()) CHECK(ev > -1e-10);
  }

  TEST_CASE("product states have rank-one reductions") {
    StateVector psi = new_zero_state(6);
    for (int q = 0; q < 6; ++q) {
      psi = apply_gate(std::move(psi), gates::rx(0.3 * (q + 1)), {q});
      psi = apply_gate(std::move(psi), gates::rz(0.5 - 0.2 * q), {q});
    }
    for (const std::vector<int>& keep : {std::vector<int>{0}, std::vector<int>{1, 2, 4}, std::vector<int>{0, 1, 2}}) {
      const auto ev = partial_trace(psi, keep).eigenvalues();
      CHECK(ev.front() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("sampling") {
    for (Index v : sample_bitstrings(new_zero_state(3), 100, 1)) CHECK(v == 0);
    const StateVector plus = apply_gate(new_zero_state(1), gates::h(), {0});
    const auto draws = sample_bitstrings(plus, 8192, 42);
    const double frac = std::accumulate(draws.begin(), draws.end(), 0.0) / 8192.0;
    CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / 8192.0));
    CHECK(sample_bitstrings(plus, 500, 7) == sample_bitstrings(plus, 500, 7));
    CHECK(sample_bitstrings(plus, 500, 7) != sample_bitstrings(plus, 500, 8));
  }

  TEST_CASE("sampling passes a chi-square test at the 1% level") {
    const StateVector psi = oracle::random_state(3, 21);
    const int shots = 100000;
    const auto draws = sample_bitstrings(psi, shots, 2024);
    std::array<double, 8> counts{};
    for (Index v : draws) counts[v] += 1.0;
    double chi2 = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double e = shots * std::norm(psi[static_cast<Index>(k)]);
      chi2 += (counts[static_cast<std::size_t>(k)] - e) * (counts[static_cast<std::size_t>(k)] - e) / e;
    }
    // 99th percentile of chi-square with 7 degrees of freedom.
    CHECK(chi2 < 18.475);
  }

  TEST_CASE("norm is preserved through long random circuits") {
    StateVector psi = oracle::random_state(8, 1);
    const auto ang = oracle::random_angles(60, 2);
    for (std::size_t k = 0; k < ang.size(); ++k) {
      const int q = static_cast<int>(k % 7);
      psi = apply_gate(std::move(psi), gates::eswap(ang[k]), {q, q + 1});
      psi = apply_gate(std::move(psi), gates::rx(ang[k] * 0.5), {q});
      psi = apply_gate(std::move(psi), gates::cx(), {q + 1, (q + 3) % 8});
    }
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}
