#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/circuit.hpp"
#include "sptvqe/observables.hpp"
#include "sptvqe/statevector.hpp"

namespace sptvqe {

enum class NoiseKind { None, Bitflip };

/// Bitflip: after every two-qubit gate, each of its qubits receives an X with
/// probability p, independently per shot.
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double p = 0.0;

  void validate() const;
  bool active() const { return kind == NoiseKind::Bitflip && p > 0.0; }
};

struct ShotBatch {
  int n_qubits = 0;
  std::uint64_t seed = 0;
  /// samples[r] holds the basis indices measured in repetition r.
  std::vector<std::vector<Index>> samples;
  /// Kept shots over drawn shots, 1 unless post-selected.
  double retention = 1.0;

  int reps() const { return static_cast<int>(samples.size()); }
  std::size_t total_shots() const;
};

/// Seed of repetition `rep` derived from a batch seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Samples `shots` bitstrings per repetition from |0...0> evolved by a bound
/// circuit (no parameter slots) under the noise model.
ShotBatch run_noisy(const Circuit& circuit, const NoiseModel& noise, int shots, int reps,
                    std::uint64_t seed);

/// Keeps the shots whose total S^z equals `sz_total`. Throws
/// EmptySelectionError when a repetition keeps nothing.
ShotBatch postselect(const ShotBatch& batch, double sz_total);

struct Estimate {
  double mean = 0.0;
  /// Standard error over repetition means; NaN with a single repetition.
  double std_error = 0.0;
  std::vector<double> rep_means;
};

using DiagonalObservable = std::function<double(Index)>;

/// Mean of repetition means and their standard error.
Estimate estimate_diagonal(const ShotBatch& batch, const DiagonalObservable& f);
/// Infinite-shot value sum_x |psi_x|^2 f(x).
double exact_diagonal(const StateVector& state, const DiagonalObservable& f);

/// Pauli labels per qubit: 0 = I, 1 = X, 2 = Y, 3 = Z. Table index is
/// label(first qubit) * 4 + label(second qubit).
struct TomographyResult {
  std::array<int, 2> qubits{0, 1};
  std::array<double, 16> pauli{};
  std::array<double, 16> pauli_stderr{};
  /// rho = 1/4 sum_P <P> P; local index bit(first) + 2 bit(second).
  Eigen::Matrix4cd raw;
  /// Real symmetric part of raw.
  Eigen::Matrix4d mitigated;
};

/// Reconstructs rho from a Pauli expectation table.
Eigen::Matrix4cd reconstruct_2q(const std::array<double, 16>& pauli);

/// Nine measurement settings (X/Y/Z on each qubit), each sampled with
/// `shots` x `reps` after appending basis rotations to `circuit`.
TomographyResult tomography_2q(const Circuit& circuit, const NoiseModel& noise,
                               std::array<int, 2> qubits, int shots, int reps,
                               std::uint64_t seed);
/// Same reconstruction fed with exact Pauli expectations of `state`.
TomographyResult tomography_2q_exact(const StateVector& state, std::array<int, 2> qubits);

/// Entanglement spectrum of the mitigated matrix; non-positive eigenvalues are
/// excluded from the levels and counted in `discarded`.
EntanglementSpectrum mitigated_spectrum(const TomographyResult& t);

/// Replaces every eSWAP slot by its three-CNOT decomposition and binds all
/// other parameters.
Circuit hardware_circuit(const Circuit& circuit, std::span<const double> params);

}  // namespace sptvqe
