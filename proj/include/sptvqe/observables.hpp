#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/spectra.hpp"
#include "sptvqe/statevector.hpp"

namespace sptvqe {

/// <psi|H|psi>. Throws ValidationError if the imaginary part exceeds 1e-10.
double energy(const StateVector& state, const SparseOperator& H);

/// Unit cell l covers sites (2l, 2l+1). The string spans cells k .. k+d.
struct StringOperatorSpec {
  int k = 0;
  int d = 1;
};

/// Value of the string operator on one basis state. Interior cells contribute
/// exp(i pi S^z_cell) = -Z_{2l} Z_{2l+1}.
double string_value(Index bits, const StringOperatorSpec& spec);

/// <O_str(d)> as a diagonal sum over basis probabilities.
double string_expectation(const StateVector& state, const StringOperatorSpec& spec);
/// Same quantity by applying the cell operators to a copy of the state and
/// taking the overlap. Returns the complex value before the real part is taken.
Complex string_expectation_operator(const StateVector& state, const StringOperatorSpec& spec);
/// <O_str(d)> for d = 1 .. L/2 - 1 with k = 0.
std::vector<double> string_profile(const StateVector& state);
/// <O_str(L/2 - 1)> with k = 0.
double string_order(const StateVector& state);

std::vector<double> onsite_magnetization(const StateVector& state);
double total_sz(const StateVector& state);
/// <(S^z_tot)^2> - <S^z_tot>^2
double total_sz_variance(const StateVector& state);
/// <S^z_i S^z_j>, i != j.
double spin_correlation(const StateVector& state, int i, int j);

/// |<a|b>|
double fidelity(const StateVector& a, const StateVector& b);

/// Eigenvalues of a density matrix at or below this are numerical zeros.
inline constexpr double kNumericalZero = 1e-12;
/// Schmidt weights at or below this (singular value 1e-12) are numerical
/// zeros. Exact zeros land near 1e-32 from the SVD.
inline constexpr double kSchmidtZero = 1e-24;

struct EntanglementSpectrum {
  std::vector<int> kept;
  /// All eigenvalues of the reduced density matrix, descending.
  std::vector<double> eigenvalues;
  /// -ln(lambda) for eigenvalues above the numerical-zero threshold, ascending.
  std::vector<double> levels;
  /// Eigenvalues at or below the threshold.
  std::size_t discarded = 0;

  std::size_t nonzero_count() const { return levels.size(); }
  /// Largest relative gap |l_2k - l_2k+1| / l_2k over consecutive pairs of
  /// nonzero eigenvalues; 1 when the count is odd.
  double max_pair_gap() const;
  /// Smallest such relative gap.
  double min_pair_gap() const;
};

/// Schmidt spectrum of `state` across `keep`, from an SVD of the reshaped
/// amplitudes; weights at or below kSchmidtZero are discarded.
EntanglementSpectrum entanglement_spectrum(const StateVector& state, std::span<const int> keep);
/// Spectrum of a Hermitian matrix; eigenvalues <= kNumericalZero are discarded
/// from the levels and counted in `discarded`.
EntanglementSpectrum entanglement_spectrum(const Eigen::MatrixXcd& rho, std::vector<int> kept = {});

/// Qubits 0 .. n/2 - 1.
std::vector<int> half_cut(int n_qubits);

}  // namespace sptvqe
