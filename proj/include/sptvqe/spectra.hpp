#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "sptvqe/kernels.hpp"
#include "sptvqe/statevector.hpp"

namespace sptvqe {

enum class Boundary { Open, Periodic };

/// Alternating Heisenberg chain: bond (2i, 2i+1) has coupling Jp, bond
/// (2i+1, 2i+2) has coupling J. Open boundaries drop the (L-1, 0) bond.
struct HamiltonianSpec {
  int L = 8;
  double J = 1.0;
  double Jp = 0.0;
  Boundary boundary = Boundary::Open;
};

inline constexpr int kMaxHamiltonianSites = 20;

/// Sum of coupling * S_i . S_j over a bond list, applied matrix-free on the
/// full 2^n space.
class SparseOperator {
 public:
  SparseOperator(int n_qubits, std::vector<Bond> bonds);

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return Index{1} << n_qubits_; }
  std::span<const Bond> bonds() const { return bonds_; }

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  StateVector apply(const StateVector& v) const;

 private:
  int n_qubits_;
  std::vector<Bond> bonds_;
};

/// Throws ArgumentError for odd or non-positive L, CapacityError above
/// kMaxHamiltonianSites.
SparseOperator build_hamiltonian(const HamiltonianSpec& spec);

/// Basis indices with total S^z = sz, ascending.
std::vector<Index> sector_basis(int n_qubits, double sz);

struct EigenPair {
  double energy = 0.0;
  double sz = 0.0;
  /// Eigenvalue of the global spin flip inside the S^z = 0 sector, else 0.
  int flip_parity = 0;
  double residual = 0.0;
  StateVector state{1};
};

/// Eigenpairs sorted by energy; near-ties (< 1e-10) ordered by sector.
struct SpectrumResult {
  int n_qubits = 0;
  std::vector<EigenPair> pairs;

  std::vector<double> energies() const;
  /// Lowest pair with the given S^z. Throws ArgumentError if absent.
  const EigenPair& lowest_in_sector(double sz = 0.0) const;
};

struct EigensolveOptions {
  /// Lowest states kept per S^z sector.
  int n_states = 8;
  std::vector<double> sectors{0.0, 1.0, -1.0, 2.0, -2.0};
  /// Residual target ||H v - E v||.
  double tol = 1e-10;
  /// Blocks up to this dimension use dense diagonalization.
  Index dense_limit = 4096;
  int krylov_dim = 160;
  int max_restarts = 60;
  std::uint64_t seed = 12345;
  bool keep_states = true;
};

/// Lowest eigenpairs per sector. The S^z = 0 sector is split further by the
/// global spin-flip parity, which separates the singlet and triplet members
/// of the edge manifold. Throws ConvergenceError with the best residual when
/// an iterative solve stalls.
SpectrumResult eigensolve(const SparseOperator& H, const EigensolveOptions& options = {});

struct Gaps {
  /// E4 - E0.
  double haldane = 0.0;
  /// E1 - E0.
  double trivial = 0.0;
};

/// Throws ArgumentError when fewer than five states are present.
Gaps gaps(const SpectrumResult& spectrum);

}  // namespace sptvqe
