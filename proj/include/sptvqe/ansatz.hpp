#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sptvqe/circuit.hpp"
#include "sptvqe/statevector.hpp"

namespace sptvqe {

/// Fixed-point initialization states. S: singlets on the inter-cell bonds
/// including the wrapping pair (L-1, 0). Exy: inter-cell singlets on
/// (1,2)..(L-3,L-2) with qubit 0 in |x> and qubit L-1 in |y>. D: intra-cell
/// singlets (0,1), (2,3), ...
enum class InitKind { S, E00, E01, E10, E11, D };

/// Eswap: brick-wall eSWAP units on top of the chosen initialization.
/// So4: brick-wall SO(4) units acting directly on |0...0>; `init` only selects
/// the brick order.
enum class Family { Eswap, So4 };

std::string_view to_string(InitKind kind);
std::string_view to_string(Family family);
InitKind parse_init_kind(std::string_view text);
Family parse_family(std::string_view text);

struct AnsatzSpec {
  int L = 8;
  InitKind init = InitKind::S;
  int depth = 1;
  Family family = Family::Eswap;

  /// Throws ArgumentError unless L is a positive multiple of 4 within the
  /// simulator width and depth >= 0.
  void validate() const;
  std::size_t gates_per_unit() const { return static_cast<std::size_t>(L - 1); }
  std::size_t parameters_per_gate() const { return family == Family::Eswap ? 1 : 6; }
  std::size_t parameter_count() const {
    return gates_per_unit() * static_cast<std::size_t>(depth) * parameters_per_gate();
  }
};

/// Brick pairs of one depth unit, in application order.
std::vector<std::array<int, 2>> brick_pairs(int L, InitKind init);

Circuit build_initialization(InitKind kind, int L);
/// Parameter slots only. Gate g (0-based, in brick order) of unit u (0-based)
/// starts at slot (u*(L-1) + g) * parameters_per_gate() and has layer u + 1.
Circuit build_variational_layer(const AnsatzSpec& spec);
/// Initialization layer followed by the variational layer.
Circuit build_circuit(const AnsatzSpec& spec);

StateVector evaluate(const AnsatzSpec& spec, std::span<const double> theta);

/// C0^d (C0^00)^-1; maps the E00 initialization state to the D one.
Circuit connecting_circuit(int L);

/// Copy of `circuit` with CX(control, target) placed after the last op whose
/// layer is <= after_depth.
Circuit insert_cnot(const Circuit& circuit, int control, int target, int after_depth);

/// |Psi> together with its parameter derivatives.
struct DerivativeStates {
  StateVector psi;
  /// Column k is d|Psi>/d theta_k.
  Eigen::MatrixXcd d;
};

/// Evaluates one ansatz repeatedly. The initialization state is prepared once.
class AnsatzEvaluator {
 public:
  explicit AnsatzEvaluator(const AnsatzSpec& spec);

  const AnsatzSpec& spec() const { return spec_; }
  std::size_t parameter_count() const { return spec_.parameter_count(); }
  const StateVector& initial_state() const { return init_state_; }
  const Circuit& variational() const { return variational_; }

  StateVector state(std::span<const double> theta) const;

  /// ESWAP: exact derivatives, d/dtheta U(theta) = U(theta + pi) / 2.
  /// SO4: each gate derivative is the central difference of the gate matrix
  /// with step `fd_step`, then propagated exactly through the later gates.
  DerivativeStates derivatives(std::span<const double> theta, double fd_step = 1e-5) const;

 private:
  void check_theta(std::span<const double> theta) const;

  AnsatzSpec spec_;
  StateVector init_state_;
  Circuit variational_;
};

}  // namespace sptvqe
