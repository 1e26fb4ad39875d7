#include "sptvqe/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "sptvqe/errors.hpp"

namespace sptvqe {

SparseOperator::SparseOperator(int n_qubits, std::vector<Bond> bonds)
    : n_qubits_(n_qubits), bonds_(std::move(bonds)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw SizeError("operator width out of range");
  for (const Bond& b : bonds_) {
    if (b.i < 0 || b.j < 0 || b.i >= n_qubits || b.j >= n_qubits || b.i == b.j) {
      throw IndexError("bond (" + std::to_string(b.i) + ", " + std::to_string(b.j) +
                       ") invalid for " + std::to_string(n_qubits) + " sites");
    }
  }
}

void SparseOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != dim() || out.size() != dim()) throw ShapeError("operator dimension mismatch");
  kernels::heisenberg_matvec(bonds_, in, out);
}

StateVector SparseOperator::apply(const StateVector& v) const {
  if (v.n_qubits() != n_qubits_) throw ShapeError("operator width does not match state");
  StateVector out(n_qubits_, std::vector<Complex>(v.dim()));
  apply(v.amplitudes(), out.amplitudes());
  return out;
}

SparseOperator build_hamiltonian(const HamiltonianSpec& spec) {
  if (spec.L < 2 || spec.L % 2 != 0) throw ArgumentError("L must be even and >= 2");
  if (spec.L > kMaxHamiltonianSites) {
    throw CapacityError("L = " + std::to_string(spec.L) + " exceeds the exact-diagonalization limit of " +
                        std::to_string(kMaxHamiltonianSites));
  }
  if (!std::isfinite(spec.J) || !std::isfinite(spec.Jp)) throw ArgumentError("couplings must be finite");
  std::vector<Bond> bonds;
  for (int b = 0; b + 1 < spec.L; ++b) bonds.push_back({b, b + 1, b % 2 == 0 ? spec.Jp : spec.J});
  if (spec.boundary == Boundary::Periodic && spec.L > 2) bonds.push_back({spec.L - 1, 0, spec.J});
  return SparseOperator(spec.L, std::move(bonds));
}

namespace {

int down_count_for(int n_qubits, double sz) {
  const double k = (n_qubits - 2.0 * sz) / 2.0;  // number of down spins
  if (std::abs(k - std::round(k)) > 1e-12 || k < 0 || k > n_qubits) {
    throw ArgumentError("S^z = " + std::to_string(sz) + " is not a sector of " +
                        std::to_string(n_qubits) + " spins");
  }
  return static_cast<int>(std::lround(k));
}

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One symmetry block: orthonormal basis vectors are either |x> or
/// (|x> + parity |~x>) / sqrt(2) for representative x (x < ~x).
struct Block {
  double sz = 0.0;
  int parity = 0;
  std::vector<Index> reps;
  RealSparse matrix;
};

Block build_block(const SparseOperator& H, double sz, int parity) {
  const int n = H.n_qubits();
  const Index full = (Index{1} << n) - 1;
  const auto basis = sector_basis(n, sz);
  Block block;
  block.sz = sz;
  block.parity = parity;
  if (parity == 0) {
    block.reps = basis;
  } else {
    for (Index x : basis) {
      if (x < (x ^ full)) block.reps.push_back(x);
    }
  }
  // position[x] = block row of x or of its representative; sign from parity
  std::vector<std::int32_t> position(Index{1} << n, -1);
  std::vector<std::int8_t> sign(Index{1} << n, 0);
  for (std::size_t r = 0; r < block.reps.size(); ++r) {
    const Index x = block.reps[r];
    position[x] = static_cast<std::int32_t>(r);
    sign[x] = 1;
    if (parity != 0) {
      position[x ^ full] = static_cast<std::int32_t>(r);
      sign[x ^ full] = static_cast<std::int8_t>(parity);
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < block.reps.size(); ++r) {
    const Index x = block.reps[r];
    double diag = 0.0;
    for (const Bond& b : H.bonds()) {
      const Index mi = Index{1} << b.i;
      const Index mj = Index{1} << b.j;
      if (((x & mi) != 0) == ((x & mj) != 0)) {
        diag += 0.25 * b.coupling;
      } else {
        diag -= 0.25 * b.coupling;
        // <r|H|x'> with x' = x flipped on the bond; the symmetrized partner
        // contributes the same matrix element through F H F = H.
        const Index y = x ^ mi ^ mj;
        triplets.emplace_back(static_cast<int>(r), position[y], 0.5 * b.coupling * sign[y]);
      }
    }
    triplets.emplace_back(static_cast<int>(r), static_cast<int>(r), diag);
  }
  const auto dim = static_cast<Eigen::Index>(block.reps.size());
  block.matrix.resize(dim, dim);
  block.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return block;
}

struct BlockPair {
  double energy;
  double residual;
  Eigen::VectorXd vec;
};

double residual_of(const RealSparse& a, const Eigen::VectorXd& v, double e) {
  return (a * v - e * v).norm();
}

std::vector<BlockPair> dense_lowest(const Block& block, int want) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(block.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  std::vector<BlockPair> out;
  const int count = std::min<int>(want, static_cast<int>(dense.rows()));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(k);
    const double e = es.eigenvalues()(k);
    out.push_back({e, residual_of(block.matrix, v, e), std::move(v)});
  }
  return out;
}

void orthogonalize(Eigen::VectorXd& v, const std::vector<BlockPair>& locked,
                   const Eigen::MatrixXd& basis, Eigen::Index m) {
  // two passes of classical Gram-Schmidt
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : locked) v -= p.vec.dot(v) * p.vec;
    if (m > 0) v -= basis.leftCols(m) * (basis.leftCols(m).transpose() * v);
  }
}

/// Lowest Ritz pair of a Krylov space grown from `start`, orthogonal to
/// `locked`, with full reorthogonalization.
BlockPair krylov_lowest(const RealSparse& a, Eigen::VectorXd start,
                        const std::vector<BlockPair>& locked, int krylov_dim) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m_max =
      std::min<Eigen::Index>(krylov_dim, n - static_cast<Eigen::Index>(locked.size()));
  Eigen::MatrixXd basis(n, m_max);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd v = std::move(start);
  orthogonalize(v, locked, basis, 0);
  v.normalize();
  Eigen::Index m = 0;
  while (m < m_max) {
    basis.col(m) = v;
    Eigen::VectorXd w = a * v;
    alpha.push_back(v.dot(w));
    ++m;
    orthogonalize(w, locked, basis, m);
    const double b = w.norm();
    if (m == m_max || b < 1e-13) break;
    beta.push_back(b);
    v = w / b;
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    t(k, k) = alpha[static_cast<std::size_t>(k)];
    if (k + 1 < m) {
      t(k, k + 1) = beta[static_cast<std::size_t>(k)];
      t(k + 1, k) = beta[static_cast<std::size_t>(k)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd x = basis.leftCols(m) * es.eigenvectors().col(0);
  orthogonalize(x, locked, basis, 0);
  x.normalize();
  const double e = x.dot(a * x);
  return {e, residual_of(a, x, e), std::move(x)};
}

std::vector<BlockPair> lanczos_lowest(const Block& block, int want,
                                      const EigensolveOptions& opt, std::uint64_t seed) {
  const RealSparse& a = block.matrix;
  const Eigen::Index n = a.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };

  std::vector<BlockPair> locked;
  auto solve_next = [&] {
    Eigen::VectorXd start = random_vector();
    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
      BlockPair p = krylov_lowest(a, std::move(start), locked, opt.krylov_dim);
      best = std::min(best, p.residual);
      if (p.residual < opt.tol) return p;
      start = std::move(p.vec);
    }
    throw ConvergenceError("Lanczos did not reach residual " + std::to_string(opt.tol) +
                               " in sector S^z = " + std::to_string(block.sz),
                           best);
  };

  const int target = std::min<int>(want, static_cast<int>(n));
  while (static_cast<int>(locked.size()) < target) locked.push_back(solve_next());
  // Deflation finds one vector per degenerate eigenspace per run, so a missed
  // partner can hide below the last locked level; search until none is left.
  auto by_energy = [](const BlockPair& l, const BlockPair& r) { return l.energy < r.energy; };
  while (static_cast<Eigen::Index>(locked.size()) < n) {
    std::sort(locked.begin(), locked.end(), by_energy);
    BlockPair extra = solve_next();
    if (extra.energy >= locked[static_cast<std::size_t>(target) - 1].energy - opt.tol) break;
    locked.push_back(std::move(extra));
  }
  std::sort(locked.begin(), locked.end(), by_energy);
  locked.resize(static_cast<std::size_t>(target));
  return locked;
}

StateVector embed(const Block& block, const Eigen::VectorXd& v, int n_qubits) {
  const Index full = (Index{1} << n_qubits) - 1;
  std::vector<Complex> amps(Index{1} << n_qubits, Complex{0.0, 0.0});
  const double scale = block.parity == 0 ? 1.0 : 1.0 / std::sqrt(2.0);
  for (std::size_t r = 0; r < block.reps.size(); ++r) {
    const Index x = block.reps[r];
    const double value = v(static_cast<Eigen::Index>(r)) * scale;
    amps[x] = value;
    if (block.parity != 0) amps[x ^ full] = block.parity * value;
  }
  return StateVector(n_qubits, std::move(amps));
}

}  // namespace

std::vector<Index> sector_basis(int n_qubits, double sz) {
  const int downs = down_count_for(n_qubits, sz);
  std::vector<Index> out;
  const Index dim = Index{1} << n_qubits;
  for (Index x = 0; x < dim; ++x) {
    if (std::popcount(x) == downs) out.push_back(x);
  }
  return out;
}

std::vector<double> SpectrumResult::energies() const {
  std::vector<double> e;
  e.reserve(pairs.size());
  for (const auto& p : pairs) e.push_back(p.energy);
  return e;
}

const EigenPair& SpectrumResult::lowest_in_sector(double sz) const {
  for (const auto& p : pairs) {
    if (std::abs(p.sz - sz) < 1e-12) return p;
  }
  throw ArgumentError("spectrum holds no state with S^z = " + std::to_string(sz));
}

SpectrumResult eigensolve(const SparseOperator& H, const EigensolveOptions& options) {
  if (options.n_states < 1) throw ArgumentError("n_states must be >= 1");
  if (options.sectors.empty()) throw ArgumentError("at least one sector is required");
  const int n = H.n_qubits();
  SpectrumResult result;
  result.n_qubits = n;

  std::uint64_t block_seed = options.seed;
  for (double sz : options.sectors) {
    std::vector<int> parities{0};
    if (std::abs(sz) < 1e-12 && n % 2 == 0) parities = {1, -1};
    std::vector<EigenPair> sector_pairs;
    for (int parity : parities) {
      const Block block = build_block(H, sz, parity);
      if (block.reps.empty()) continue;
      const auto found = static_cast<Index>(block.reps.size()) <= options.dense_limit
                             ? dense_lowest(block, options.n_states)
                             : lanczos_lowest(block, options.n_states, options, block_seed++);
      for (const auto& p : found) {
        EigenPair e;
        e.energy = p.energy;
        e.sz = sz;
        e.flip_parity = parity;
        e.residual = p.residual;
        if (options.keep_states) e.state = embed(block, p.vec, n);
        sector_pairs.push_back(std::move(e));
      }
    }
    std::stable_sort(sector_pairs.begin(), sector_pairs.end(),
                     [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
    if (static_cast<int>(sector_pairs.size()) > options.n_states) {
      sector_pairs.resize(static_cast<std::size_t>(options.n_states));
    }
    for (auto& p : sector_pairs) result.pairs.push_back(std::move(p));
  }

  auto& pairs = result.pairs;
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
  // Within clusters of near-equal energies, order by sector, then parity.
  std::size_t start = 0;
  while (start < pairs.size()) {
    std::size_t end = start + 1;
    while (end < pairs.size() && pairs[end].energy - pairs[end - 1].energy < 1e-10) ++end;
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                     pairs.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const EigenPair& a, const EigenPair& b) {
                       if (a.sz != b.sz) return a.sz < b.sz;
                       return a.flip_parity > b.flip_parity;
                     });
    start = end;
  }
  return result;
}

Gaps gaps(const SpectrumResult& spectrum) {
  if (spectrum.pairs.size() < 5) {
    throw ArgumentError("gap extraction needs at least 5 states, got " +
                        std::to_string(spectrum.pairs.size()));
  }
  const double e0 = spectrum.pairs[0].energy;
  return {spectrum.pairs[4].energy - e0, spectrum.pairs[1].energy - e0};
}

}  // namespace sptvqe
