#include "sptvqe/observables.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"
#include "sptvqe/kernels.hpp"

namespace sptvqe {

namespace {

double sz_of(Index bits, int site) { return ((bits >> site) & 1U) ? -0.5 : 0.5; }

void check_string_spec(int n_qubits, const StringOperatorSpec& spec) {
  const int cells = n_qubits / 2;
  if (n_qubits % 2 != 0) throw ArgumentError("string operator needs an even number of sites");
  if (spec.k < 0 || spec.d < 1 || spec.k + spec.d >= cells) {
    throw ArgumentError("string operator cells k = " + std::to_string(spec.k) + ", d = " +
                        std::to_string(spec.d) + " out of range for " + std::to_string(cells) +
                        " cells");
  }
}

}  // namespace

double energy(const StateVector& state, const SparseOperator& H) {
  const StateVector h = H.apply(state);
  const Complex e = inner_product(state, h);
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
    throw ValidationError("energy has imaginary part " + std::to_string(e.imag()));
  }
  return e.real();
}

double string_value(Index bits, const StringOperatorSpec& spec) {
  const int a = 2 * spec.k;
  const int b = 2 * (spec.k + spec.d);
  double v = (sz_of(bits, a) + sz_of(bits, a + 1)) * (sz_of(bits, b) + sz_of(bits, b + 1));
  for (int l = spec.k + 1; l < spec.k + spec.d; ++l) {
    // -Z Z on the cell: -1 when the two spins are parallel
    if (((bits >> (2 * l)) & 1U) == ((bits >> (2 * l + 1)) & 1U)) v = -v;
  }
  return v;
}

double string_expectation(const StateVector& state, const StringOperatorSpec& spec) {
  check_string_spec(state.n_qubits(), spec);
  double acc = 0.0;
  for (Index x = 0; x < state.dim(); ++x) {
    const double p = std::norm(state[x]);
    if (p != 0.0) acc += p * string_value(x, spec);
  }
  return acc;
}

Complex string_expectation_operator(const StateVector& state, const StringOperatorSpec& spec) {
  check_string_spec(state.n_qubits(), spec);
  // S^z is Hermitian, not unitary, so it goes through the kernel directly
  // instead of the validating apply_gate.
  const Mat2 half_z = gates::diag(0.5, -0.5).mat2();
  auto cell_sz = [&](const StateVector& in, int cell) {
    StateVector left = in;
    StateVector right = in;
    kernels::apply_1q(left.amplitudes(), 2 * cell, half_z);
    kernels::apply_1q(right.amplitudes(), 2 * cell + 1, half_z);
    for (Index x = 0; x < left.dim(); ++x) left[x] += right[x];
    return left;
  };
  StateVector phi = cell_sz(state, spec.k + spec.d);
  // exp(i pi S^z) on one site is diag(i, -i)
  const GateMatrix rot = gates::diag(Complex{0.0, 1.0}, Complex{0.0, -1.0});
  for (int l = spec.k + 1; l < spec.k + spec.d; ++l) {
    apply_gate_inplace(phi, rot, std::array<int, 1>{2 * l});
    apply_gate_inplace(phi, rot, std::array<int, 1>{2 * l + 1});
  }
  phi = cell_sz(phi, spec.k);
  return inner_product(state, phi);
}

std::vector<double> string_profile(const StateVector& state) {
  std::vector<double> out;
  for (int d = 1; d < state.n_qubits() / 2; ++d) out.push_back(string_expectation(state, {0, d}));
  return out;
}

double string_order(const StateVector& state) {
  return string_expectation(state, {0, state.n_qubits() / 2 - 1});
}

std::vector<double> onsite_magnetization(const StateVector& state) {
  std::vector<double> m(static_cast<std::size_t>(state.n_qubits()), 0.0);
  for (Index x = 0; x < state.dim(); ++x) {
    const double p = std::norm(state[x]);
    if (p == 0.0) continue;
    for (int i = 0; i < state.n_qubits(); ++i) m[static_cast<std::size_t>(i)] += p * sz_of(x, i);
  }
  return m;
}

double total_sz(const StateVector& state) {
  double acc = 0.0;
  for (Index x = 0; x < state.dim(); ++x) {
    acc += std::norm(state[x]) * (state.n_qubits() - 2.0 * std::popcount(x)) / 2.0;
  }
  return acc;
}

double total_sz_variance(const StateVector& state) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (Index x = 0; x < state.dim(); ++x) {
    const double p = std::norm(state[x]);
    const double s = (state.n_qubits() - 2.0 * std::popcount(x)) / 2.0;
    m1 += p * s;
    m2 += p * s * s;
  }
  return m2 - m1 * m1;
}

double spin_correlation(const StateVector& state, int i, int j) {
  const int n = state.n_qubits();
  if (i == j) throw ArgumentError("spin_correlation needs distinct sites");
  if (i < 0 || j < 0 || i >= n || j >= n) throw IndexError("site out of range");
  double acc = 0.0;
  for (Index x = 0; x < state.dim(); ++x) acc += std::norm(state[x]) * sz_of(x, i) * sz_of(x, j);
  return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::min(1.0, std::abs(inner_product(a, b)));
}

double EntanglementSpectrum::max_pair_gap() const {
  const std::size_t n = levels.size();
  if (n % 2 != 0) return 1.0;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    worst = std::max(worst, (eigenvalues[k] - eigenvalues[k + 1]) / eigenvalues[k]);
  }
  return worst;
}

double EntanglementSpectrum::min_pair_gap() const {
  const std::size_t n = levels.size();
  if (n % 2 != 0 || n == 0) return 1.0;
  double best = 1.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    best = std::min(best, (eigenvalues[k] - eigenvalues[k + 1]) / eigenvalues[k]);
  }
  return best;
}

EntanglementSpectrum entanglement_spectrum(const Eigen::MatrixXcd& rho, std::vector<int> kept) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ShapeError("density matrix must be square");
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  EntanglementSpectrum out;
  out.kept = std::move(kept);
  const auto& ev = es.eigenvalues();
  for (Eigen::Index k = ev.size() - 1; k >= 0; --k) out.eigenvalues.push_back(ev(k));
  for (double l : out.eigenvalues) {
    if (l > kNumericalZero) {
      out.levels.push_back(-std::log(l));
    } else {
      ++out.discarded;
    }
  }
  return out;
}

EntanglementSpectrum entanglement_spectrum(const StateVector& state, std::span<const int> keep) {
  EntanglementSpectrum out;
  const Eigen::MatrixXcd m = bipartite_matrix(state, keep, &out.kept);
  // Schmidt values carry absolute error ~1e-16, so lambda = sigma^2 stays
  // accurate in relative terms far below what diagonalizing rho resolves.
  Eigen::VectorXd sigma;
  if (std::min(m.rows(), m.cols()) <= 512) {
    sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  } else {
    sigma = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  }
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const double lambda = k < sigma.size() ? sigma(k) * sigma(k) : 0.0;
    out.eigenvalues.push_back(lambda);
    if (lambda > kSchmidtZero) {
      out.levels.push_back(-std::log(lambda));
    } else {
      ++out.discarded;
    }
  }
  return out;
}

std::vector<int> half_cut(int n_qubits) {
  std::vector<int> keep;
  for (int q = 0; q < n_qubits / 2; ++q) keep.push_back(q);
  return keep;
}

}  // namespace sptvqe
