#include "sptvqe/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sptvqe/errors.hpp"

namespace sptvqe {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw SizeError("qubit count " + std::to_string(n) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
}

void check_targets(const StateVector& state, std::span<const int> targets,
                   int expected) {
  if (static_cast<int>(targets.size()) != expected) {
    throw ShapeError("gate of arity " + std::to_string(expected) + " given " +
                     std::to_string(targets.size()) + " targets");
  }
  for (int t : targets) {
    if (t < 0 || t >= state.n_qubits()) {
      throw IndexError("target qubit " + std::to_string(t) + " out of range");
    }
  }
  if (expected == 2 && targets[0] == targets[1]) {
    throw IndexError("duplicate target qubit " + std::to_string(targets[0]));
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  amps_.assign(Index{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (amps_.size() != (Index{1} << n_qubits)) {
    throw ShapeError("amplitude array of length " + std::to_string(amps_.size()) +
                     " for " + std::to_string(n_qubits) + " qubits");
  }
}

StateVector StateVector::basis_state(int n_qubits, Index index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw IndexError("basis index out of range");
  s[0] = 0.0;
  s[index] = 1.0;
  return s;
}

double StateVector::norm() const { return std::sqrt(kernels::norm_squared(amps_)); }

StateVector& StateVector::operator*=(Complex s) {
  for (auto& a : amps_) a *= s;
  return *this;
}

bool DensityMatrix::is_hermitian(double tol) const {
  return (elements - elements.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<double> DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(elements, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

void apply_gate_inplace(StateVector& state, const GateMatrix& gate,
                        std::span<const int> targets) {
  check_targets(state, targets, gate.arity());
  if (gate_validation_enabled() && !gate.is_unitary(1e-10)) {
    throw ValidationError("gate is not unitary within 1e-10");
  }
  if (gate.arity() == 1) {
    kernels::apply_1q(state.amplitudes(), targets[0], gate.mat2());
  } else {
    kernels::apply_2q(state.amplitudes(), targets[0], targets[1], gate.mat4());
  }
}

StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::span<const int> targets) {
  apply_gate_inplace(state, gate, targets);
  return state;
}

StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::initializer_list<int> targets) {
  return apply_gate(std::move(state), gate,
                    std::span<const int>(targets.begin(), targets.size()));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ShapeError("inner product of states with " + std::to_string(a.n_qubits()) +
                     " and " + std::to_string(b.n_qubits()) + " qubits");
  }
  return kernels::inner_product(a.amplitudes(), b.amplitudes());
}

Eigen::MatrixXcd bipartite_matrix(const StateVector& state, std::span<const int> keep,
                                  std::vector<int>* kept_sorted) {
  const int n = state.n_qubits();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || static_cast<int>(kept.size()) >= n) {
    throw ArgumentError("partial trace needs a nonempty proper subset of qubits");
  }
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw ArgumentError("duplicate qubit in keep set");
  }
  if (kept.front() < 0 || kept.back() >= n) {
    throw IndexError("keep set references a qubit out of range");
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  const Index dk = Index{1} << kept.size();
  const Index de = Index{1} << traced.size();
  auto scatter = [](Index local, const std::vector<int>& bits) {
    Index out = 0;
    for (std::size_t b = 0; b < bits.size(); ++b) {
      if ((local >> b) & 1U) out |= Index{1} << bits[b];
    }
    return out;
  };
  std::vector<Index> kept_offset(dk);
  for (Index a = 0; a < dk; ++a) kept_offset[a] = scatter(a, kept);
  std::vector<Index> env_offset(de);
  for (Index e = 0; e < de; ++e) env_offset[e] = scatter(e, traced);

  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(de));
  for (Index e = 0; e < de; ++e) {
    for (Index a = 0; a < dk; ++a) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) =
          state[kept_offset[a] | env_offset[e]];
    }
  }
  if (kept_sorted != nullptr) *kept_sorted = std::move(kept);
  return m;
}

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep) {
  DensityMatrix rho;
  const Eigen::MatrixXcd m = bipartite_matrix(state, keep, &rho.qubits);
  rho.n_qubits = static_cast<int>(rho.qubits.size());
  rho.elements = m * m.adjoint();
  return rho;
}

DensityMatrix partial_trace(const StateVector& state, std::initializer_list<int> keep) {
  return partial_trace(state, std::span<const int>(keep.begin(), keep.size()));
}

BasisSampler::BasisSampler(const StateVector& state) {
  cdf_.resize(state.dim());
  double acc = 0.0;
  for (Index i = 0; i < state.dim(); ++i) {
    acc += std::norm(state[i]);
    cdf_[i] = acc;
  }
}

Index BasisSampler::lookup(double u) const {
  const double target = u * cdf_.back();
  // First entry with cdf > target; zero-probability entries are never chosen.
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.end()) --it;
  return static_cast<Index>(it - cdf_.begin());
}

std::vector<Index> sample_bitstrings(const StateVector& state, int shots,
                                     std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("shots must be >= 1");
  BasisSampler sampler(state);
  std::mt19937_64 rng(seed);
  std::vector<Index> out(static_cast<std::size_t>(shots));
  for (auto& s : out) s = sampler.draw(rng);
  return out;
}

}  // namespace sptvqe
