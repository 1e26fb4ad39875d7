#include "sptvqe/gates.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "sptvqe/errors.hpp"

namespace sptvqe {

// ---------------------------------------------------------------------------
// GateMatrix

GateMatrix::GateMatrix(std::initializer_list<Complex> entries) {
  if (entries.size() == 4) {
    dim_ = 2;
  } else if (entries.size() == 16) {
    dim_ = 4;
  } else {
    throw ShapeError("gate matrix needs 4 or 16 entries");
  }
  std::copy(entries.begin(), entries.end(), data_.begin());
}

GateMatrix GateMatrix::zeros(int dim) {
  if (dim != 2 && dim != 4) throw ShapeError("gate dimension must be 2 or 4");
  GateMatrix g;
  g.dim_ = dim;
  g.data_.fill(Complex{0.0, 0.0});
  return g;
}

GateMatrix GateMatrix::identity(int dim) {
  GateMatrix g = zeros(dim);
  for (int i = 0; i < dim; ++i) g(i, i) = 1.0;
  return g;
}

GateMatrix GateMatrix::adjoint() const {
  GateMatrix out = zeros(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out(r, c) = std::conj((*this)(c, r));
  return out;
}

GateMatrix GateMatrix::operator*(const GateMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw ShapeError("gate dimension mismatch");
  GateMatrix out = zeros(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < dim_; ++k) acc += (*this)(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  return out;
}

GateMatrix GateMatrix::operator*(Complex s) const {
  GateMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

GateMatrix GateMatrix::operator+(const GateMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw ShapeError("gate dimension mismatch");
  GateMatrix out = *this;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

GateMatrix GateMatrix::operator-(const GateMatrix& rhs) const { return *this + rhs * -1.0; }

GateMatrix GateMatrix::qubit_swapped() const {
  if (dim_ != 4) throw ShapeError("qubit_swapped needs a two-qubit gate");
  constexpr int perm[4] = {0, 2, 1, 3};
  GateMatrix out = zeros(4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(perm[r], perm[c]) = (*this)(r, c);
  return out;
}

bool GateMatrix::is_unitary(double tol) const {
  return (adjoint() * *this).max_abs_diff(identity(dim_)) <= tol;
}

double GateMatrix::max_abs_diff(const GateMatrix& other) const {
  if (dim_ != other.dim_) throw ShapeError("gate dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim_ * dim_); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

Mat2 GateMatrix::mat2() const {
  if (dim_ != 2) throw ShapeError("not a single-qubit gate");
  return {data_[0], data_[1], data_[2], data_[3]};
}

Mat4 GateMatrix::mat4() const {
  if (dim_ != 4) throw ShapeError("not a two-qubit gate");
  Mat4 m;
  std::copy(data_.begin(), data_.end(), m.begin());
  return m;
}

namespace {
#ifdef NDEBUG
std::atomic<bool> g_validate{false};
#else
std::atomic<bool> g_validate{true};
#endif
}  // namespace

void set_gate_validation(bool enabled) { g_validate = enabled; }
bool gate_validation_enabled() { return g_validate; }

// ---------------------------------------------------------------------------
// constructors

namespace gates {

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

GateMatrix x() { return {0.0, 1.0, 1.0, 0.0}; }
GateMatrix y() { return {0.0, -kI, kI, 0.0}; }
GateMatrix z() { return {1.0, 0.0, 0.0, -1.0}; }

GateMatrix h() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}

GateMatrix diag(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }

GateMatrix rx(double a) {
  const double c = std::cos(a / 2);
  const double s = std::sin(a / 2);
  return {c, -kI * s, -kI * s, c};
}

GateMatrix rz(double a) { return diag(std::polar(1.0, -a / 2), std::polar(1.0, a / 2)); }

GateMatrix phase(double a) { return diag(1.0, std::polar(1.0, a)); }

GateMatrix cx() {
  // index = control + 2 * target; flips target when control is 1
  return {1.0, 0.0, 0.0, 0.0,  //
          0.0, 0.0, 0.0, 1.0,  //
          0.0, 0.0, 1.0, 0.0,  //
          0.0, 1.0, 0.0, 0.0};
}

GateMatrix swap() {
  return {1.0, 0.0, 0.0, 0.0,  //
          0.0, 0.0, 1.0, 0.0,  //
          0.0, 1.0, 0.0, 0.0,  //
          0.0, 0.0, 0.0, 1.0};
}

GateMatrix eswap(double theta) {
  return GateMatrix::identity(4) * std::cos(theta / 2) +
         swap() * (-kI * std::sin(theta / 2));
}

Circuit eswap_decomposed(double theta) {
  // Three-CNOT form of exp(-i t (XX + YY + ZZ)), t = theta / 4, with the two
  // Ry rotations rewritten as Rz-conjugated Rx so only Rx/Rz appear.
  Circuit c(2);
  c.add(rz(-pi), {1});
  c.add(cx(), {1, 0});
  c.add(rz(pi / 2 + theta / 2), {0});
  c.add(rx(-theta / 2 - pi / 2), {1});
  c.add(rz(pi / 2), {1});
  c.add(cx(), {0, 1});
  c.add(rz(-pi / 2), {1});
  c.add(rx(pi / 2 + theta / 2), {1});
  c.add(rz(pi / 2), {1});
  c.add(cx(), {1, 0});
  c.add(rz(pi / 2), {0});
  return c;
}

Circuit singlet_prep() {
  Circuit c(2);
  c.add(x(), {0});
  c.add(x(), {1});
  c.add(h(), {0});
  c.add(cx(), {0, 1});
  return c;
}

Circuit global_flip(int L) {
  if (L < 1) throw ArgumentError("global_flip needs L >= 1");
  Circuit c(L);
  for (int q = 0; q < L; ++q) c.add(x(), {q});
  return c;
}

const std::array<Eigen::Matrix4d, 6>& so4_generators() {
  static const std::array<Eigen::Matrix4d, 6> gens = [] {
    std::array<Eigen::Matrix4d, 6> g;
    int a = 0;
    for (int r = 0; r < 4; ++r) {
      for (int c = r + 1; c < 4; ++c) {
        g[static_cast<std::size_t>(a)] = Eigen::Matrix4d::Zero();
        g[static_cast<std::size_t>(a)](r, c) = 1.0;
        g[static_cast<std::size_t>(a)](c, r) = -1.0;
        ++a;
      }
    }
    return g;
  }();
  return gens;
}

Eigen::Matrix4d so4_matrix(const std::array<double, 6>& angles) {
  Eigen::Matrix4d gen = Eigen::Matrix4d::Zero();
  const auto& g = so4_generators();
  for (std::size_t a = 0; a < 6; ++a) gen += angles[a] * g[a];
  return gen.exp();
}

GateMatrix so4_gate(const So4Params& p) {
  for (double v : p.angles) {
    if (!std::isfinite(v)) throw ArgumentError("SO(4) angle is not finite");
  }
  const Eigen::Matrix4d m = so4_matrix(p.angles);
  GateMatrix out = GateMatrix::zeros(4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = m(r, c);
  return out;
}

double phase_aligned_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix shape mismatch");
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      if (std::abs(b(r, c)) > 1e-8) {
        const Complex ratio = a(r, c) / b(r, c);
        const Complex phase = std::abs(ratio) > 0 ? ratio / std::abs(ratio) : Complex{1.0, 0.0};
        return (a - phase * b).cwiseAbs().maxCoeff();
      }
    }
  }
  return a.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd to_eigen(const GateMatrix& g) {
  Eigen::MatrixXcd m(g.dim(), g.dim());
  for (int r = 0; r < g.dim(); ++r)
    for (int c = 0; c < g.dim(); ++c) m(r, c) = g(r, c);
  return m;
}

}  // namespace gates
}  // namespace sptvqe
