#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/gate_matrix.hpp"
#include "sptvqe/kernels.hpp"

namespace sptvqe {

inline constexpr int kMaxQubits = 24;

/// Dense statevector. Basis index bit i is the computational state of qubit i
/// (little-endian), and qubit i is lattice site i. |0> is spin up.
class StateVector {
 public:
  /// |0...0> on `n_qubits` qubits. Throws SizeError outside [1, 24].
  explicit StateVector(int n_qubits);
  /// Takes ownership of `amplitudes`; length must be exactly 2^n_qubits.
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  static StateVector basis_state(int n_qubits, Index index);

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return static_cast<Index>(amps_.size()); }

  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }

  Complex operator[](Index i) const { return amps_[i]; }
  Complex& operator[](Index i) { return amps_[i]; }

  double norm() const;
  StateVector& operator*=(Complex s);

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

/// Reduced density matrix over an ascending list of kept qubits. The first
/// kept qubit is the lowest bit of the row/column index.
struct DensityMatrix {
  int n_qubits = 0;
  std::vector<int> qubits;
  Eigen::MatrixXcd elements;

  Complex trace() const { return elements.trace(); }
  bool is_hermitian(double tol = 1e-10) const;
  /// Eigenvalues in descending order.
  std::vector<double> eigenvalues() const;
};

StateVector new_zero_state(int n_qubits);

/// Applies `gate` on `targets` (one or two distinct qubits) and returns the
/// transformed state. Pass the state by value / std::move to avoid the copy.
StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::span<const int> targets);
StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::initializer_list<int> targets);
void apply_gate_inplace(StateVector& state, const GateMatrix& gate,
                        std::span<const int> targets);

/// <a|b>, conjugate-linear in `a`.
Complex inner_product(const StateVector& a, const StateVector& b);

/// Throws ArgumentError unless `keep` is a nonempty proper subset.
DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep);
/// Amplitudes reshaped into a (kept x traced) matrix M with rho = M M^dagger.
/// Row index bits follow the ascending kept set, which is written to
/// `kept_sorted` when given. Same argument checks as partial_trace.
Eigen::MatrixXcd bipartite_matrix(const StateVector& state, std::span<const int> keep,
                                  std::vector<int>* kept_sorted = nullptr);
DensityMatrix partial_trace(const StateVector& state, std::initializer_list<int> keep);

/// Inverse-CDF sampler over |amplitude|^2 of a fixed state.
class BasisSampler {
 public:
  explicit BasisSampler(const StateVector& state);
  template <class Rng>
  Index draw(Rng& rng) const {
    return lookup(uniform01(rng()));
  }

  /// Maps 64 random bits onto [0, 1) with 53-bit resolution.
  static double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  Index lookup(double u) const;
  std::vector<double> cdf_;
};

/// i.i.d. computational-basis samples from |amplitude|^2. Deterministic in `seed`.
std::vector<Index> sample_bitstrings(const StateVector& state, int shots,
                                     std::uint64_t seed);

}  // namespace sptvqe
