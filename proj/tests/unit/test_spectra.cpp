#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sptvqe/errors.hpp"
#include "sptvqe/spectra.hpp"

using namespace sptvqe;

namespace {

oracle::Mat dense_of(const SparseOperator& H) {
  const auto n = static_cast<Eigen::Index>(H.dim());
  oracle::Mat m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const StateVector col = H.apply(StateVector::basis_state(H.n_qubits(), static_cast<Index>(c)));
    m.col(c) = oracle::to_vec(col);
  }
  return m;
}

std::vector<double> dense_levels(const oracle::Mat& m) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(m);
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

/// Dense eigenvalues of the S^z = 0 block of a dense Hamiltonian.
double dense_sector_ground(const oracle::SpMat& full, int n) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index x = 0; x < full.rows(); ++x) {
    if (std::popcount(static_cast<unsigned>(x)) * 2 == n) idx.push_back(x);
  }
  oracle::Mat b(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = full.coeff(idx[r], idx[c]);
  return dense_levels(b).front();
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("matrix-free Hamiltonian equals the Kronecker oracle") {
    for (double jp : {0.0, 0.3, -1.7}) {
      for (bool periodic : {false, true}) {
        const SparseOperator H = build_hamiltonian({8, 1.0, jp, periodic ? Boundary::Periodic : Boundary::Open});
        CHECK((dense_of(H) - oracle::dense(oracle::chain(8, jp, 1.0, periodic))).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(build_hamiltonian({3, 1.0, 0.1, Boundary::Open}), ArgumentError);
    CHECK_THROWS_AS(build_hamiltonian({0, 1.0, 0.1, Boundary::Open}), ArgumentError);
    CHECK_THROWS_AS(build_hamiltonian({24, 1.0, 0.1, Boundary::Open}), CapacityError);
  }

  TEST_CASE("Hermiticity on random vector pairs") {
    const SparseOperator H = build_hamiltonian({10, 1.0, 0.37, Boundary::Open});
    for (unsigned s = 0; s < 10; ++s) {
      const StateVector x = oracle::random_state(10, s), y = oracle::random_state(10, 100 + s);
      const Complex xhy = inner_product(x, H.apply(y));
      const Complex yhx = inner_product(y, H.apply(x));
      CHECK(std::abs(xhy - std::conj(yhx)) < 1e-10);
    }
  }

  TEST_CASE("S^z sectors are invariant") {
    const SparseOperator H = build_hamiltonian({8, 1.0, 0.6, Boundary::Periodic});
    const auto basis = sector_basis(8, 1.0);
    CHECK(basis.size() == 56);
    std::vector<Complex> v(256, 0.0), out(256);
    for (std::size_t k = 0; k < basis.size(); ++k) v[basis[k]] = Complex(1.0 + k, -0.5 * k);
    H.apply(v, out);
    for (Index x = 0; x < 256; ++x) {
      if (std::popcount(x) != 3) CHECK(out[x] == Complex(0.0));
    }
  }

  TEST_CASE("two-site and four-site spectra") {
    EigensolveOptions opt;
    opt.sectors = {0.0, 1.0, -1.0};
    const SpectrumResult two = eigensolve(build_hamiltonian({2, 1.0, 2.0, Boundary::Open}), opt);
    const auto e = two.energies();
    REQUIRE(e.size() == 4);
    CHECK(e[0] == doctest::Approx(-1.5));
    for (int k = 1; k < 4; ++k) CHECK(e[static_cast<std::size_t>(k)] == doctest::Approx(0.5));

    const SpectrumResult four = eigensolve(build_hamiltonian({4, 1.0, 0.0, Boundary::Open}));
    const auto e4 = four.energies();
    for (int k = 0; k < 4; ++k) CHECK(e4[static_cast<std::size_t>(k)] == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(e4[4] > -0.75 + 0.1);

    const SpectrumResult dimer = eigensolve(build_hamiltonian({4, 1.0, 10.0, Boundary::Open}));
    const oracle::Mat dense = oracle::dense(oracle::chain(4, 10.0));
    const auto ref = dense_levels(dense);
    CHECK(dimer.pairs[0].energy < -14.0);
    CHECK(dimer.pairs[0].energy == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(gaps(dimer).trivial == doctest::Approx(ref[1] - ref[0]).epsilon(1e-10));
  }

  TEST_CASE("dense and Lanczos paths agree") {
    const SparseOperator H = build_hamiltonian({12, 1.0, 0.5, Boundary::Open});
    const oracle::SpMat full = oracle::chain(12, 0.5);
    const double ref = dense_sector_ground(full, 12);
    EigensolveOptions dense_opt;
    const SpectrumResult a = eigensolve(H, dense_opt);
    EigensolveOptions lanczos_opt;
    lanczos_opt.dense_limit = 16;
    const SpectrumResult b = eigensolve(H, lanczos_opt);
    CHECK(a.pairs[0].energy == doctest::Approx(ref).epsilon(1e-12));
    CHECK(std::abs(b.pairs[0].energy - ref) < 1e-8);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t k = 0; k < a.pairs.size(); ++k) {
      CHECK(std::abs(a.pairs[k].energy - b.pairs[k].energy) < 1e-8);
      CHECK(b.pairs[k].residual < 1e-8);
    }
  }

  TEST_CASE("full dense spectrum oracle at L = 8") {
    const SparseOperator H = build_hamiltonian({8, 1.0, -0.7, Boundary::Open});
    const auto ref = dense_levels(oracle::dense(oracle::chain(8, -0.7)));
    EigensolveOptions opt;
    opt.n_states = 300;
    opt.sectors = {0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0, 4.0, -4.0};
    const auto e = eigensolve(H, opt).energies();
    REQUIRE(e.size() == 256);
    for (std::size_t k = 0; k < e.size(); ++k) CHECK(std::abs(e[k] - ref[k]) < 1e-10);
  }

  TEST_CASE("residuals, sorting, SU(2) multiplets") {
    const SparseOperator H = build_hamiltonian({10, 1.0, 0.25, Boundary::Open});
    const SpectrumResult r = eigensolve(H);
    for (std::size_t k = 0; k < r.pairs.size(); ++k) {
      const auto& p = r.pairs[k];
      CHECK(p.residual < 1e-8);
      const StateVector hv = H.apply(p.state);
      double res = 0.0;
      for (Index x = 0; x < hv.dim(); ++x) res += std::norm(hv[x] - p.energy * p.state[x]);
      CHECK(std::sqrt(res) < 1e-8);
      if (k > 0) CHECK(r.pairs[k - 1].energy <= p.energy + 1e-10);
    }
    for (const auto& p : r.pairs) {
      if (p.sz > 0) {
        const bool mirrored = std::any_of(r.pairs.begin(), r.pairs.end(), [&](const EigenPair& q) {
          return q.sz == -p.sz && std::abs(q.energy - p.energy) < 1e-8;
        });
        CHECK(mirrored);
      }
    }
    CHECK(r.lowest_in_sector(0.0).sz == 0.0);
    CHECK_THROWS_AS(r.lowest_in_sector(3.0), ArgumentError);
  }

  TEST_CASE("decoupled fixed point") {
    const SpectrumResult r = eigensolve(build_hamiltonian({16, 1.0, 0.0, Boundary::Open}));
    CHECK(r.pairs[0].energy == doctest::Approx(-5.25).epsilon(1e-12));
    const Gaps g = gaps(r);
    CHECK(std::abs(g.haldane - 1.0) < 1e-8);
    CHECK(std::abs(g.trivial) < 1e-10);
    for (int L : {8, 12}) {
      CHECK(std::abs(gaps(eigensolve(build_hamiltonian({L, 1.0, 0.0, Boundary::Open}))).trivial) < 1e-10);
    }
  }

  TEST_CASE("dimer-limit trivial gap tracks the isolated cell") {
    const Gaps g8 = gaps(eigensolve(build_hamiltonian({8, 1.0, 10.0, Boundary::Open})));
    const auto ref4 = dense_levels(oracle::dense(oracle::chain(4, 10.0)));
    CHECK(std::abs(g8.trivial - (ref4[1] - ref4[0])) < 0.05 * (ref4[1] - ref4[0]));
  }

  TEST_CASE("gaps needs five states") {
    EigensolveOptions opt;
    opt.n_states = 1;
    opt.sectors = {0.0, 1.0};
    CHECK_THROWS_AS(gaps(eigensolve(build_hamiltonian({8, 1.0, 0.1, Boundary::Open}), opt)), ArgumentError);
  }
}
