#pragma once

#include <array>
#include <initializer_list>

#include "sptvqe/kernels.hpp"

namespace sptvqe {

/// Dense 2x2 or 4x4 gate. For two-qubit gates the local basis index is
/// bit(first target) + 2 * bit(second target).
class GateMatrix {
 public:
  GateMatrix() = default;
  /// Row-major entries; `entries.size()` must be 4 or 16.
  GateMatrix(std::initializer_list<Complex> entries);

  static GateMatrix identity(int dim);
  static GateMatrix zeros(int dim);

  int dim() const { return dim_; }
  int arity() const { return dim_ == 2 ? 1 : 2; }

  Complex& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * dim_ + c)]; }
  Complex operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * dim_ + c)]; }

  GateMatrix adjoint() const;
  GateMatrix operator*(const GateMatrix& rhs) const;
  GateMatrix operator*(Complex s) const;
  GateMatrix operator+(const GateMatrix& rhs) const;
  GateMatrix operator-(const GateMatrix& rhs) const;

  /// Same operator with the two target qubits exchanged.
  GateMatrix qubit_swapped() const;

  bool is_unitary(double tol = 1e-12) const;
  double max_abs_diff(const GateMatrix& other) const;

  Mat2 mat2() const;
  Mat4 mat4() const;

 private:
  int dim_ = 2;
  std::array<Complex, 16> data_{};
};

/// Unitarity checks inside apply_gate. Off in optimized builds, on in debug
/// builds; the test binaries switch it on explicitly.
void set_gate_validation(bool enabled);
bool gate_validation_enabled();

}  // namespace sptvqe
