#pragma once
// Independent reference constructions for the unit tests. Everything here is
// built from dense Kronecker products so it shares no code with the kernels.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <random>
#include <vector>

#include "sptvqe/statevector.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<Complex>;

inline Mat pauli(char which) {
  Mat m(2, 2);
  switch (which) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline SpMat kron(const SpMat& a, const SpMat& b) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

/// Single-site operator on site `q` of an n-site chain, little-endian: the
/// highest site is the leftmost Kronecker factor.
inline SpMat site_op(int n, int q, const Mat& op) {
  SpMat out(1, 1);
  out.insert(0, 0) = 1.0;
  const SpMat id = pauli('I').sparseView();
  const SpMat o = op.sparseView();
  for (int s = n - 1; s >= 0; --s) out = kron(out, s == q ? o : id);
  return out;
}

inline SpMat heisenberg_bond(int n, int i, int j) {
  SpMat h(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (char c : {'X', 'Y', 'Z'}) h += 0.25 * (site_op(n, i, pauli(c)) * site_op(n, j, pauli(c)));
  return h;
}

/// Alternating chain: coupling jp on (2i, 2i+1), j on (2i+1, 2i+2).
inline SpMat chain(int n, double jp, double j = 1.0, bool periodic = false) {
  SpMat h(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int b = 0; b + 1 < n; ++b) h += (b % 2 == 0 ? jp : j) * heisenberg_bond(n, b, b + 1);
  if (periodic) h += j * heisenberg_bond(n, n - 1, 0);
  return h;
}

inline Mat dense(const SpMat& m) { return Mat(m); }

inline Vec to_vec(const sptvqe::StateVector& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (sptvqe::Index i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

inline sptvqe::StateVector from_vec(const Vec& v) {
  const int n = static_cast<int>(std::log2(static_cast<double>(v.size())) + 0.5);
  std::vector<Complex> a(v.data(), v.data() + v.size());
  return sptvqe::StateVector(n, std::move(a));
}

inline sptvqe::StateVector random_state(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vec v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
  return from_vec(v / v.norm());
}

/// Two-site singlet (|01> - |10>)/sqrt2 as a 4-vector, local index bit(a) + 2 bit(b).
inline Vec singlet() {
  Vec s = Vec::Zero(4);
  s(2) = 1.0 / std::sqrt(2.0);   // qubit a = 0, qubit b = 1
  s(1) = -1.0 / std::sqrt(2.0);  // qubit a = 1, qubit b = 0
  return s;
}

/// Product of two-site states placed on the given pairs; remaining sites
/// take the single-site value 0 or 1 given in `fixed` (-1 = not fixed).
inline Vec pair_product(int n, const std::vector<std::array<int, 2>>& pairs,
                        const std::vector<int>& fixed) {
  const Vec s = singlet();
  Vec out = Vec::Zero(Eigen::Index{1} << n);
  for (Eigen::Index x = 0; x < out.size(); ++x) {
    Complex amp = 1.0;
    for (const auto& p : pairs) {
      const int a = static_cast<int>((x >> p[0]) & 1), b = static_cast<int>((x >> p[1]) & 1);
      amp *= s(a + 2 * b);
    }
    for (int q = 0; q < n; ++q) {
      if (fixed[static_cast<std::size_t>(q)] >= 0 && ((x >> q) & 1) != fixed[static_cast<std::size_t>(q)]) amp = 0.0;
    }
    out(x) = amp;
  }
  return out;
}

inline std::vector<double> random_angles(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  std::vector<double> v(n);
  for (auto& t : v) t = u(rng);
  return v;
}

}  // namespace oracle
