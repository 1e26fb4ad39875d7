#pragma once

// Amplitude-loop kernels. Every kernel exists twice: a plain serial loop kept
// as the reference implementation, and an OpenMP version used by default once
// the state is large enough to amortize the fork/join. Gate kernels write each
// output amplitude from a fixed set of inputs, so both versions are bitwise
// identical; only the reductions (inner product, norm) may differ in rounding.

#include <array>
#include <complex>
#include <cstdint>
#include <span>

namespace sptvqe {

using Complex = std::complex<double>;
using Index = std::uint64_t;

/// Row-major 2x2 matrix in the local basis {|0>, |1>}.
using Mat2 = std::array<Complex, 4>;
/// Row-major 4x4 matrix; local basis index = bit(first target) + 2 * bit(second target).
using Mat4 = std::array<Complex, 16>;

/// Nearest-neighbour S_i . S_j term with coupling strength.
struct Bond {
  int i = 0;
  int j = 0;
  double coupling = 1.0;
};

namespace kernels {

/// States with at least this many amplitudes go through the OpenMP path.
inline constexpr Index kParallelThreshold = Index{1} << 12;

namespace serial {
void apply_1q(std::span<Complex> amps, int q, const Mat2& m);
void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m);
void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta);
void apply_x(std::span<Complex> amps, int q);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);
double norm_squared(std::span<const Complex> a);
void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out);
}  // namespace serial

namespace omp {
void apply_1q(std::span<Complex> amps, int q, const Mat2& m);
void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m);
void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta);
void apply_x(std::span<Complex> amps, int q);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);
double norm_squared(std::span<const Complex> a);
void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out);
}  // namespace omp

// Dispatching entry points.
void apply_1q(std::span<Complex> amps, int q, const Mat2& m);
void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m);
void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta);
void apply_x(std::span<Complex> amps, int q);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);
double norm_squared(std::span<const Complex> a);
void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out);

/// Inserts a zero bit at position `bit` of `k` (shifting higher bits up).
constexpr Index insert_zero_bit(Index k, int bit) {
  const Index low = k & ((Index{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace kernels
}  // namespace sptvqe
