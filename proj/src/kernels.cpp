#include "sptvqe/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace sptvqe::kernels {
namespace {

// Loop bodies shared by both variants; the variants differ only in the
// surrounding loop.

inline void body_1q(Complex* a, Index k, int q, const Mat2& m) {
  const Index i0 = insert_zero_bit(k, q);
  const Index i1 = i0 | (Index{1} << q);
  const Complex v0 = a[i0];
  const Complex v1 = a[i1];
  a[i0] = m[0] * v0 + m[1] * v1;
  a[i1] = m[2] * v0 + m[3] * v1;
}

inline void body_2q(Complex* a, Index k, int q0, int q1, const Mat4& m) {
  const int lo = std::min(q0, q1);
  const int hi = std::max(q0, q1);
  const Index base = insert_zero_bit(insert_zero_bit(k, lo), hi);
  const Index b0 = Index{1} << q0;
  const Index b1 = Index{1} << q1;
  const Index idx[4] = {base, base | b0, base | b1, base | b0 | b1};
  const Complex v[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
  for (int r = 0; r < 4; ++r) {
    a[idx[r]] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] +
                m[4 * r + 3] * v[3];
  }
}

struct EswapCoeffs {
  Complex diag;   // e^{-i theta/2} on |00>, |11>
  double c;       // cos(theta/2)
  Complex mix;    // -i sin(theta/2)
};

inline EswapCoeffs eswap_coeffs(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {Complex(c, -s), c, Complex(0.0, -s)};
}

inline void body_eswap(Complex* a, Index k, int q0, int q1,
                       const EswapCoeffs& e) {
  const int lo = std::min(q0, q1);
  const int hi = std::max(q0, q1);
  const Index base = insert_zero_bit(insert_zero_bit(k, lo), hi);
  const Index i01 = base | (Index{1} << q0);
  const Index i10 = base | (Index{1} << q1);
  const Index i11 = i01 | i10;
  const Complex v01 = a[i01];
  const Complex v10 = a[i10];
  a[base] *= e.diag;
  a[i11] *= e.diag;
  a[i01] = e.c * v01 + e.mix * v10;
  a[i10] = e.mix * v01 + e.c * v10;
}

inline void body_x(Complex* a, Index k, int q) {
  const Index i0 = insert_zero_bit(k, q);
  const Index i1 = i0 | (Index{1} << q);
  std::swap(a[i0], a[i1]);
}

inline Complex body_matvec(std::span<const Bond> bonds, const Complex* in,
                           Index x) {
  Complex acc{0.0, 0.0};
  for (const Bond& b : bonds) {
    const Index mi = Index{1} << b.i;
    const Index mj = Index{1} << b.j;
    const bool bi = (x & mi) != 0;
    const bool bj = (x & mj) != 0;
    if (bi == bj) {
      acc += 0.25 * b.coupling * in[x];
    } else {
      acc += -0.25 * b.coupling * in[x] + 0.5 * b.coupling * in[x ^ mi ^ mj];
    }
  }
  return acc;
}

using SIndex = std::int64_t;  // OpenMP loops want a signed induction variable

}  // namespace

// ---------------------------------------------------------------------------
// serial reference

namespace serial {

void apply_1q(std::span<Complex> amps, int q, const Mat2& m) {
  const Index n = amps.size() / 2;
  for (Index k = 0; k < n; ++k) body_1q(amps.data(), k, q, m);
}

void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m) {
  const Index n = amps.size() / 4;
  for (Index k = 0; k < n; ++k) body_2q(amps.data(), k, q0, q1, m);
}

void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta) {
  const auto e = eswap_coeffs(theta);
  const Index n = amps.size() / 4;
  for (Index k = 0; k < n; ++k) body_eswap(amps.data(), k, q0, q1, e);
}

void apply_x(std::span<Complex> amps, int q) {
  const Index n = amps.size() / 2;
  for (Index k = 0; k < n; ++k) body_x(amps.data(), k, q);
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex t = std::conj(a[i]) * b[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double norm_squared(std::span<const Complex> a) {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return s;
}

void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out) {
  for (Index x = 0; x < in.size(); ++x) out[x] = body_matvec(bonds, in.data(), x);
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP

namespace omp {

void apply_1q(std::span<Complex> amps, int q, const Mat2& m) {
  const SIndex n = static_cast<SIndex>(amps.size() / 2);
  Complex* a = amps.data();
#pragma omp parallel for schedule(static)
  for (SIndex k = 0; k < n; ++k) body_1q(a, static_cast<Index>(k), q, m);
}

void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m) {
  const SIndex n = static_cast<SIndex>(amps.size() / 4);
  Complex* a = amps.data();
#pragma omp parallel for schedule(static)
  for (SIndex k = 0; k < n; ++k) body_2q(a, static_cast<Index>(k), q0, q1, m);
}

void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta) {
  const auto e = eswap_coeffs(theta);
  const SIndex n = static_cast<SIndex>(amps.size() / 4);
  Complex* a = amps.data();
#pragma omp parallel for schedule(static)
  for (SIndex k = 0; k < n; ++k) body_eswap(a, static_cast<Index>(k), q0, q1, e);
}

void apply_x(std::span<Complex> amps, int q) {
  const SIndex n = static_cast<SIndex>(amps.size() / 2);
  Complex* a = amps.data();
#pragma omp parallel for schedule(static)
  for (SIndex k = 0; k < n; ++k) body_x(a, static_cast<Index>(k), q);
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  const SIndex n = static_cast<SIndex>(a.size());
  double re = 0.0;
  double im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im)
  for (SIndex i = 0; i < n; ++i) {
    const Complex t = std::conj(a[i]) * b[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double norm_squared(std::span<const Complex> a) {
  const SIndex n = static_cast<SIndex>(a.size());
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (SIndex i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out) {
  const SIndex n = static_cast<SIndex>(in.size());
  const Complex* src = in.data();
  Complex* dst = out.data();
#pragma omp parallel for schedule(static)
  for (SIndex x = 0; x < n; ++x) dst[x] = body_matvec(bonds, src, static_cast<Index>(x));
}

}  // namespace omp

// ---------------------------------------------------------------------------
// dispatch

namespace {
inline bool use_parallel(std::size_t n) { return n >= kParallelThreshold; }
}  // namespace

void apply_1q(std::span<Complex> amps, int q, const Mat2& m) {
  use_parallel(amps.size()) ? omp::apply_1q(amps, q, m) : serial::apply_1q(amps, q, m);
}

void apply_2q(std::span<Complex> amps, int q0, int q1, const Mat4& m) {
  use_parallel(amps.size()) ? omp::apply_2q(amps, q0, q1, m)
                            : serial::apply_2q(amps, q0, q1, m);
}

void apply_eswap(std::span<Complex> amps, int q0, int q1, double theta) {
  use_parallel(amps.size()) ? omp::apply_eswap(amps, q0, q1, theta)
                            : serial::apply_eswap(amps, q0, q1, theta);
}

void apply_x(std::span<Complex> amps, int q) {
  use_parallel(amps.size()) ? omp::apply_x(amps, q) : serial::apply_x(amps, q);
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  return use_parallel(a.size()) ? omp::inner_product(a, b) : serial::inner_product(a, b);
}

double norm_squared(std::span<const Complex> a) {
  return use_parallel(a.size()) ? omp::norm_squared(a) : serial::norm_squared(a);
}

void heisenberg_matvec(std::span<const Bond> bonds, std::span<const Complex> in,
                       std::span<Complex> out) {
  use_parallel(in.size()) ? omp::heisenberg_matvec(bonds, in, out)
                          : serial::heisenberg_matvec(bonds, in, out);
}

}  // namespace sptvqe::kernels
