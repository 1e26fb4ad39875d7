#pragma once

#include <array>

#include <Eigen/Dense>

#include "sptvqe/circuit.hpp"
#include "sptvqe/gate_matrix.hpp"

namespace sptvqe::gates {

GateMatrix x();
GateMatrix y();
GateMatrix z();
GateMatrix h();
/// Diagonal single-qubit gate diag(d0, d1); used for S^z-type phases.
GateMatrix diag(Complex d0, Complex d1);
GateMatrix rx(double angle);
GateMatrix rz(double angle);
/// diag(1, e^{i angle})
GateMatrix phase(double angle);
/// Control = first target, target = second target.
GateMatrix cx();
GateMatrix swap();

/// exp(-i theta SWAP / 2) = cos(theta/2) I - i sin(theta/2) SWAP.
GateMatrix eswap(double theta);

/// Two-qubit circuit (qubits 0, 1) of 8 single-qubit Rx/Rz rotations and
/// three CNOTs equal to eswap(theta) up to a global phase.
Circuit eswap_decomposed(double theta);

/// X on both qubits, H on qubit 0, CNOT 0 -> 1. Maps |00> to
/// (|0>_0 |1>_1 - |1>_0 |0>_1) / sqrt(2).
Circuit singlet_prep();

/// X on every one of the L qubits.
Circuit global_flip(int L);

/// Six rotation angles of a real SO(4) two-qubit gate.
struct So4Params {
  std::array<double, 6> angles{};
};

/// The six elementary antisymmetric generators E_rc - E_cr in the pair order
/// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
const std::array<Eigen::Matrix4d, 6>& so4_generators();

/// exp(sum_a angles[a] * generator_a); real orthogonal with det +1.
GateMatrix so4_gate(const So4Params& p);
Eigen::Matrix4d so4_matrix(const std::array<double, 6>& angles);

/// max |a - e^{i phi} b| where phi aligns b to a on the first entry of b with
/// modulus > 1e-8 (row-major scan).
double phase_aligned_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

Eigen::MatrixXcd to_eigen(const GateMatrix& g);

}  // namespace sptvqe::gates
