#include "sptvqe/ansatz.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"

namespace sptvqe {

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::S: return "S";
    case InitKind::E00: return "E00";
    case InitKind::E01: return "E01";
    case InitKind::E10: return "E10";
    case InitKind::E11: return "E11";
    case InitKind::D: return "D";
  }
  return "?";
}

std::string_view to_string(Family family) {
  return family == Family::Eswap ? "ESWAP" : "SO4";
}

InitKind parse_init_kind(std::string_view text) {
  for (InitKind k : {InitKind::S, InitKind::E00, InitKind::E01, InitKind::E10, InitKind::E11,
                     InitKind::D}) {
    if (to_string(k) == text) return k;
  }
  throw ArgumentError("unknown initialization kind '" + std::string(text) + "'");
}

Family parse_family(std::string_view text) {
  if (text == "ESWAP") return Family::Eswap;
  if (text == "SO4") return Family::So4;
  throw ArgumentError("unknown ansatz family '" + std::string(text) + "'");
}

namespace {

void check_length(int L) {
  if (L < 4 || L % 4 != 0 || L > kMaxQubits) {
    throw ArgumentError("L must be a positive multiple of 4 no larger than " +
                        std::to_string(kMaxQubits) + ", got " + std::to_string(L));
  }
}

}  // namespace

void AnsatzSpec::validate() const {
  check_length(L);
  if (depth < 0) throw ArgumentError("depth must be >= 0");
}

std::vector<std::array<int, 2>> brick_pairs(int L, InitKind init) {
  check_length(L);
  std::vector<std::array<int, 2>> even;
  std::vector<std::array<int, 2>> odd;
  for (int i = 0; i + 1 < L; i += 2) even.push_back({i, i + 1});
  for (int i = 1; i + 1 < L; i += 2) odd.push_back({i, i + 1});
  // The first sub-layer acts on the pairs that do not hold an initial singlet.
  auto& first = init == InitKind::D ? odd : even;
  auto& second = init == InitKind::D ? even : odd;
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

Circuit build_initialization(InitKind kind, int L) {
  check_length(L);
  const Circuit singlet = gates::singlet_prep();
  Circuit c(L);
  switch (kind) {
    case InitKind::S:
      for (int i = 1; i + 1 < L; i += 2) c.append_mapped(singlet, {i, i + 1});
      c.append_mapped(singlet, {L - 1, 0});
      break;
    case InitKind::E00:
    case InitKind::E01:
    case InitKind::E10:
    case InitKind::E11:
      for (int i = 1; i + 2 < L; i += 2) c.append_mapped(singlet, {i, i + 1});
      if (kind == InitKind::E10 || kind == InitKind::E11) c.add(gates::x(), {0});
      if (kind == InitKind::E01 || kind == InitKind::E11) c.add(gates::x(), {L - 1});
      break;
    case InitKind::D:
      for (int i = 0; i + 1 < L; i += 2) c.append_mapped(singlet, {i, i + 1});
      break;
  }
  return c;
}

Circuit build_variational_layer(const AnsatzSpec& spec) {
  spec.validate();
  Circuit c(spec.L);
  const auto pairs = brick_pairs(spec.L, spec.init);
  std::size_t slot = 0;
  for (int u = 0; u < spec.depth; ++u) {
    for (const auto& p : pairs) {
      if (spec.family == Family::Eswap) {
        c.add_eswap(p[0], p[1], slot, u + 1);
      } else {
        c.add_so4(p[0], p[1], slot, u + 1);
      }
      slot += spec.parameters_per_gate();
    }
  }
  return c;
}

Circuit build_circuit(const AnsatzSpec& spec) {
  spec.validate();
  Circuit c = spec.family == Family::Eswap ? build_initialization(spec.init, spec.L)
                                           : Circuit(spec.L);
  c.append(build_variational_layer(spec));
  return c;
}

StateVector evaluate(const AnsatzSpec& spec, std::span<const double> theta) {
  return AnsatzEvaluator(spec).state(theta);
}

Circuit connecting_circuit(int L) {
  Circuit c = build_initialization(InitKind::E00, L).inverse();
  c.append(build_initialization(InitKind::D, L));
  return c;
}

Circuit insert_cnot(const Circuit& circuit, int control, int target, int after_depth) {
  if (after_depth < 0 || after_depth > circuit.max_layer()) {
    throw ArgumentError("insertion depth " + std::to_string(after_depth) + " outside [0, " +
                        std::to_string(circuit.max_layer()) + "]");
  }
  std::size_t position = 0;
  for (std::size_t k = 0; k < circuit.size(); ++k) {
    if (circuit.ops()[k].layer <= after_depth) position = k + 1;
  }
  GateOp op;
  op.kind = OpKind::Fixed;
  op.matrix = gates::cx();
  op.arity = 2;
  op.targets = {control, target};
  op.layer = after_depth;
  Circuit out = circuit;
  out.insert(position, op);
  return out;
}

AnsatzEvaluator::AnsatzEvaluator(const AnsatzSpec& spec)
    : spec_(spec), init_state_(spec.L), variational_(build_variational_layer(spec)) {
  if (spec_.family == Family::Eswap) {
    apply_circuit_inplace(init_state_, build_initialization(spec_.init, spec_.L));
  }
}

void AnsatzEvaluator::check_theta(std::span<const double> theta) const {
  if (theta.size() != parameter_count()) {
    throw ShapeError("expected " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(theta.size()));
  }
}

StateVector AnsatzEvaluator::state(std::span<const double> theta) const {
  check_theta(theta);
  StateVector psi = init_state_;
  for (const auto& op : variational_.ops()) apply_op_inplace(psi, op, theta);
  return psi;
}

DerivativeStates AnsatzEvaluator::derivatives(std::span<const double> theta,
                                              double fd_step) const {
  check_theta(theta);
  const auto dim = static_cast<Eigen::Index>(init_state_.dim());
  const auto n_params = static_cast<Eigen::Index>(parameter_count());
  DerivativeStates out{init_state_, Eigen::MatrixXcd(dim, n_params)};
  auto column = [&](Eigen::Index c) {
    return std::span<Complex>(out.d.col(c).data(), static_cast<std::size_t>(dim));
  };
  const auto psi_amps = out.psi.amplitudes();

  // Invariant: columns [0, done) hold derivatives propagated up to the current op.
  Eigen::Index done = 0;
  std::vector<double> shifted(theta.begin(), theta.end());
  for (const auto& op : variational_.ops()) {
    const int q0 = op.targets[0];
    const int q1 = op.targets[1];
    const auto first = static_cast<Eigen::Index>(op.slot);
    if (op.kind == OpKind::EswapSlot) {
      auto col = column(first);
      std::copy(psi_amps.begin(), psi_amps.end(), col.begin());
      kernels::apply_eswap(col, q0, q1, theta[op.slot] + std::numbers::pi);
      out.d.col(first) *= 0.5;
    } else {
      for (std::size_t a = 0; a < 6; ++a) {
        const std::size_t slot = op.slot + a;
        shifted[slot] = theta[slot] + fd_step;
        const GateMatrix plus = resolve(op, shifted);
        shifted[slot] = theta[slot] - fd_step;
        const GateMatrix minus = resolve(op, shifted);
        shifted[slot] = theta[slot];
        const GateMatrix dv = (plus - minus) * Complex{0.5 / fd_step, 0.0};
        auto col = column(first + static_cast<Eigen::Index>(a));
        std::copy(psi_amps.begin(), psi_amps.end(), col.begin());
        kernels::apply_2q(col, q0, q1, dv.mat4());
      }
    }
    if (op.kind == OpKind::EswapSlot) {
      for (Eigen::Index c = 0; c < done; ++c) kernels::apply_eswap(column(c), q0, q1, theta[op.slot]);
    } else {
      const Mat4 m = resolve(op, theta).mat4();
      for (Eigen::Index c = 0; c < done; ++c) kernels::apply_2q(column(c), q0, q1, m);
    }
    apply_op_inplace(out.psi, op, theta);
    done = first + static_cast<Eigen::Index>(spec_.parameters_per_gate());
  }
  return out;
}

}  // namespace sptvqe
