#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/gate_matrix.hpp"
#include "sptvqe/statevector.hpp"

namespace sptvqe {

enum class OpKind {
  Fixed,      // concrete matrix
  EswapSlot,  // exp(-i theta SWAP / 2), theta = params[slot]
  So4Slot,    // SO(4) rotation, params[slot .. slot + 5]
};

struct GateOp {
  OpKind kind = OpKind::Fixed;
  GateMatrix matrix;
  std::array<int, 2> targets{0, 0};
  int arity = 1;
  std::size_t slot = 0;
  /// 0 for the initialization layer, d = 1..D for the d-th variational unit.
  int layer = 0;
};

/// Ordered list of gate applications, some of which may read their angle
/// from a parameter vector bound at application time.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<GateOp>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  /// One past the highest parameter slot referenced.
  std::size_t parameter_count() const;
  int max_layer() const;
  std::size_t two_qubit_gate_count() const;

  Circuit& add(const GateMatrix& gate, std::initializer_list<int> targets, int layer = 0);
  Circuit& add(const GateMatrix& gate, std::span<const int> targets, int layer = 0);
  Circuit& add_eswap(int q0, int q1, std::size_t slot, int layer);
  Circuit& add_so4(int q0, int q1, std::size_t first_slot, int layer);
  /// Appends `other` (same width) unchanged.
  Circuit& append(const Circuit& other);
  /// Appends a fixed fragment, relabelling fragment qubit k as `qubit_map[k]`.
  Circuit& append_mapped(const Circuit& fragment, std::span<const int> qubit_map,
                         int layer = 0);
  Circuit& append_mapped(const Circuit& fragment, std::initializer_list<int> qubit_map,
                         int layer = 0);
  void insert(std::size_t position, GateOp op);

  /// Reverse order, adjoint matrices. Only fixed circuits can be inverted.
  Circuit inverse() const;
  /// Replaces every parameter slot by its concrete matrix.
  Circuit bind(std::span<const double> params) const;

 private:
  void check_targets(std::span<const int> targets) const;

  int n_qubits_;
  std::vector<GateOp> ops_;
};

/// Concrete matrix of one op for the given parameters.
GateMatrix resolve(const GateOp& op, std::span<const double> params);

void apply_op_inplace(StateVector& state, const GateOp& op,
                      std::span<const double> params);
void apply_circuit_inplace(StateVector& state, const Circuit& circuit,
                           std::span<const double> params = {});
StateVector apply_circuit(StateVector state, const Circuit& circuit,
                          std::span<const double> params = {});

/// Full 2^n x 2^n matrix of a small circuit (n <= 10), column k = C|k>.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit,
                                 std::span<const double> params = {});

}  // namespace sptvqe
