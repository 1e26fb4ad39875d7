#include "sptvqe/circuit.hpp"

#include <algorithm>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"

namespace sptvqe {

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw SizeError("circuit width out of range");
}

std::size_t Circuit::parameter_count() const {
  std::size_t n = 0;
  for (const auto& op : ops_) {
    if (op.kind == OpKind::EswapSlot) n = std::max(n, op.slot + 1);
    if (op.kind == OpKind::So4Slot) n = std::max(n, op.slot + 6);
  }
  return n;
}

int Circuit::max_layer() const {
  int m = 0;
  for (const auto& op : ops_) m = std::max(m, op.layer);
  return m;
}

std::size_t Circuit::two_qubit_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](const GateOp& op) { return op.arity == 2; }));
}

void Circuit::check_targets(std::span<const int> targets) const {
  if (targets.size() != 1 && targets.size() != 2) throw ShapeError("ops act on 1 or 2 qubits");
  for (int t : targets) {
    if (t < 0 || t >= n_qubits_) throw IndexError("target qubit " + std::to_string(t) + " out of range");
  }
  if (targets.size() == 2 && targets[0] == targets[1]) throw IndexError("duplicate target qubit");
}

Circuit& Circuit::add(const GateMatrix& gate, std::span<const int> targets, int layer) {
  check_targets(targets);
  if (static_cast<int>(targets.size()) != gate.arity()) throw ShapeError("gate arity does not match targets");
  GateOp op;
  op.kind = OpKind::Fixed;
  op.matrix = gate;
  op.arity = gate.arity();
  op.targets = {targets[0], targets.size() == 2 ? targets[1] : targets[0]};
  op.layer = layer;
  ops_.push_back(op);
  return *this;
}

Circuit& Circuit::add(const GateMatrix& gate, std::initializer_list<int> targets, int layer) {
  return add(gate, std::span<const int>(targets.begin(), targets.size()), layer);
}

Circuit& Circuit::add_eswap(int q0, int q1, std::size_t slot, int layer) {
  const int t[2] = {q0, q1};
  check_targets(t);
  GateOp op;
  op.kind = OpKind::EswapSlot;
  op.arity = 2;
  op.targets = {q0, q1};
  op.slot = slot;
  op.layer = layer;
  ops_.push_back(op);
  return *this;
}

Circuit& Circuit::add_so4(int q0, int q1, std::size_t first_slot, int layer) {
  const int t[2] = {q0, q1};
  check_targets(t);
  GateOp op;
  op.kind = OpKind::So4Slot;
  op.arity = 2;
  op.targets = {q0, q1};
  op.slot = first_slot;
  op.layer = layer;
  ops_.push_back(op);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw ShapeError("appending circuit of different width");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  return *this;
}

Circuit& Circuit::append_mapped(const Circuit& fragment, std::span<const int> qubit_map,
                                int layer) {
  if (static_cast<int>(qubit_map.size()) != fragment.n_qubits()) {
    throw ShapeError("qubit map size does not match fragment width");
  }
  for (GateOp op : fragment.ops_) {
    op.targets[0] = qubit_map[static_cast<std::size_t>(op.targets[0])];
    op.targets[1] = qubit_map[static_cast<std::size_t>(op.targets[1])];
    const int t[2] = {op.targets[0], op.targets[1]};
    check_targets(std::span<const int>(t, static_cast<std::size_t>(op.arity)));
    op.layer = layer;
    ops_.push_back(op);
  }
  return *this;
}

Circuit& Circuit::append_mapped(const Circuit& fragment, std::initializer_list<int> qubit_map,
                                int layer) {
  return append_mapped(fragment, std::span<const int>(qubit_map.begin(), qubit_map.size()), layer);
}

void Circuit::insert(std::size_t position, GateOp op) {
  if (position > ops_.size()) throw ArgumentError("insert position past end of circuit");
  const int t[2] = {op.targets[0], op.targets[1]};
  check_targets(std::span<const int>(t, static_cast<std::size_t>(op.arity)));
  ops_.insert(ops_.begin() + static_cast<std::ptrdiff_t>(position), op);
}

Circuit Circuit::inverse() const {
  Circuit inv(n_qubits_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    if (it->kind != OpKind::Fixed) throw UnsupportedError("bind parameters before inverting");
    GateOp op = *it;
    op.matrix = op.matrix.adjoint();
    inv.ops_.push_back(op);
  }
  return inv;
}

Circuit Circuit::bind(std::span<const double> params) const {
  Circuit out(n_qubits_);
  for (GateOp op : ops_) {
    op.matrix = resolve(op, params);
    op.kind = OpKind::Fixed;
    out.ops_.push_back(op);
  }
  return out;
}

GateMatrix resolve(const GateOp& op, std::span<const double> params) {
  switch (op.kind) {
    case OpKind::Fixed:
      return op.matrix;
    case OpKind::EswapSlot:
      if (op.slot >= params.size()) throw ShapeError("parameter slot out of range");
      return gates::eswap(params[op.slot]);
    case OpKind::So4Slot: {
      if (op.slot + 6 > params.size()) throw ShapeError("parameter slot out of range");
      gates::So4Params p;
      std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(op.slot), 6, p.angles.begin());
      return gates::so4_gate(p);
    }
  }
  throw ArgumentError("unknown op kind");
}

void apply_op_inplace(StateVector& state, const GateOp& op, std::span<const double> params) {
  switch (op.kind) {
    case OpKind::Fixed:
      apply_gate_inplace(state, op.matrix,
                         std::span<const int>(op.targets.data(), static_cast<std::size_t>(op.arity)));
      return;
    case OpKind::EswapSlot:
      if (op.slot >= params.size()) throw ShapeError("parameter slot out of range");
      kernels::apply_eswap(state.amplitudes(), op.targets[0], op.targets[1], params[op.slot]);
      return;
    case OpKind::So4Slot:
      kernels::apply_2q(state.amplitudes(), op.targets[0], op.targets[1], resolve(op, params).mat4());
      return;
  }
}

void apply_circuit_inplace(StateVector& state, const Circuit& circuit,
                           std::span<const double> params) {
  if (state.n_qubits() != circuit.n_qubits()) throw ShapeError("circuit width does not match state");
  if (params.size() < circuit.parameter_count()) throw ShapeError("parameter vector too short for circuit");
  for (const auto& op : circuit.ops()) apply_op_inplace(state, op, params);
}

StateVector apply_circuit(StateVector state, const Circuit& circuit, std::span<const double> params) {
  apply_circuit_inplace(state, circuit, params);
  return state;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit, std::span<const double> params) {
  const int n = circuit.n_qubits();
  if (n > 10) throw CapacityError("circuit_unitary limited to 10 qubits");
  const Index dim = Index{1} << n;
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Index k = 0; k < dim; ++k) {
    StateVector s = apply_circuit(StateVector::basis_state(n, k), circuit, params);
    for (Index r = 0; r < dim; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = s[r];
  }
  return u;
}

}  // namespace sptvqe
