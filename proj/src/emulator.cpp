#include "sptvqe/emulator.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/gates.hpp"

namespace sptvqe {

namespace {

/// Amplitude budget for cached trajectory samplers (doubles).
constexpr std::size_t kCacheBudget = std::size_t{1} << 25;

double uniform(std::mt19937_64& rng) { return BasisSampler::uniform01(rng()); }

std::vector<std::vector<Index>> empty_reps(int reps) {
  return std::vector<std::vector<Index>>(static_cast<std::size_t>(reps));
}

}  // namespace

void NoiseModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("noise probability must lie in [0, 1]");
}

std::size_t ShotBatch::total_shots() const {
  std::size_t n = 0;
  for (const auto& r : samples) n += r.size();
  return n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ShotBatch run_noisy(const Circuit& circuit, const NoiseModel& noise, int shots, int reps,
                    std::uint64_t seed) {
  noise.validate();
  if (shots < 1 || reps < 1) throw ArgumentError("shots and reps must be >= 1");
  if (circuit.parameter_count() != 0) throw ArgumentError("run_noisy needs a bound circuit");
  const int n = circuit.n_qubits();
  ShotBatch batch;
  batch.n_qubits = n;
  batch.seed = seed;
  batch.samples = empty_reps(reps);

  if (!noise.active()) {
    const BasisSampler sampler(apply_circuit(StateVector(n), circuit));
    for (int r = 0; r < reps; ++r) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      auto& out = batch.samples[static_cast<std::size_t>(r)];
      out.reserve(static_cast<std::size_t>(shots));
      for (int s = 0; s < shots; ++s) out.push_back(sampler.draw(rng));
    }
    return batch;
  }

  std::vector<std::size_t> two_qubit_ops;
  for (std::size_t k = 0; k < circuit.size(); ++k) {
    if (circuit.ops()[k].arity == 2) two_qubit_ops.push_back(k);
  }
  // A flip pattern lists (two-qubit op ordinal * 2 + which target) in order.
  auto simulate = [&](const std::vector<std::uint32_t>& flips) {
    StateVector psi(n);
    std::size_t next = 0;
    std::size_t ordinal = 0;
    for (std::size_t k = 0; k < circuit.size(); ++k) {
      const GateOp& op = circuit.ops()[k];
      apply_op_inplace(psi, op, {});
      if (op.arity != 2) continue;
      while (next < flips.size() && flips[next] / 2 == ordinal) {
        kernels::apply_x(psi.amplitudes(), op.targets[flips[next] % 2]);
        ++next;
      }
      ++ordinal;
    }
    return psi;
  };

  std::map<std::vector<std::uint32_t>, BasisSampler> cache;
  std::size_t cached = 0;
  std::vector<std::uint32_t> flips;
  for (int r = 0; r < reps; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    auto& out = batch.samples[static_cast<std::size_t>(r)];
    out.reserve(static_cast<std::size_t>(shots));
    for (int s = 0; s < shots; ++s) {
      flips.clear();
      for (std::uint32_t k = 0; k < two_qubit_ops.size(); ++k) {
        if (uniform(rng) < noise.p) flips.push_back(2 * k);
        if (uniform(rng) < noise.p) flips.push_back(2 * k + 1);
      }
      auto it = cache.find(flips);
      if (it != cache.end()) {
        out.push_back(it->second.draw(rng));
        continue;
      }
      BasisSampler sampler(simulate(flips));
      out.push_back(sampler.draw(rng));
      if (cached + (std::size_t{1} << n) <= kCacheBudget) {
        cached += std::size_t{1} << n;
        cache.emplace(flips, std::move(sampler));
      }
    }
  }
  return batch;
}

ShotBatch postselect(const ShotBatch& batch, double sz_total) {
  const int n = batch.n_qubits;
  const double downs = (n - 2.0 * sz_total) / 2.0;
  if (std::abs(downs - std::round(downs)) > 1e-12 || downs < 0 || downs > n) {
    throw ArgumentError("S^z = " + std::to_string(sz_total) + " is not reachable with " +
                        std::to_string(n) + " spins");
  }
  const int target = static_cast<int>(std::lround(downs));
  ShotBatch out;
  out.n_qubits = n;
  out.seed = batch.seed;
  out.samples = empty_reps(batch.reps());
  std::size_t kept = 0;
  for (int r = 0; r < batch.reps(); ++r) {
    const auto& in = batch.samples[static_cast<std::size_t>(r)];
    auto& dst = out.samples[static_cast<std::size_t>(r)];
    for (Index x : in) {
      if (std::popcount(x) == target) dst.push_back(x);
    }
    if (dst.empty()) {
      throw EmptySelectionError("post-selection kept no shots in repetition " + std::to_string(r));
    }
    kept += dst.size();
  }
  out.retention = batch.retention * static_cast<double>(kept) /
                  static_cast<double>(batch.total_shots());
  return out;
}

Estimate estimate_diagonal(const ShotBatch& batch, const DiagonalObservable& f) {
  if (batch.reps() == 0 || batch.total_shots() == 0) throw ArgumentError("empty shot batch");
  Estimate e;
  for (const auto& rep : batch.samples) {
    if (rep.empty()) throw ArgumentError("repetition without shots");
    double acc = 0.0;
    for (Index x : rep) acc += f(x);
    e.rep_means.push_back(acc / static_cast<double>(rep.size()));
  }
  const auto k = static_cast<double>(e.rep_means.size());
  for (double m : e.rep_means) e.mean += m;
  e.mean /= k;
  if (e.rep_means.size() < 2) {
    e.std_error = std::nan("");
    return e;
  }
  double ss = 0.0;
  for (double m : e.rep_means) ss += (m - e.mean) * (m - e.mean);
  e.std_error = std::sqrt(ss / (k - 1.0) / k);
  return e;
}

double exact_diagonal(const StateVector& state, const DiagonalObservable& f) {
  double acc = 0.0;
  for (Index x = 0; x < state.dim(); ++x) {
    const double p = std::norm(state[x]);
    if (p != 0.0) acc += p * f(x);
  }
  return acc;
}

namespace {

const std::array<Eigen::Matrix2cd, 4>& paulis() {
  static const std::array<Eigen::Matrix2cd, 4> p = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    const Complex i{0.0, 1.0};
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

GateMatrix pauli_gate(int label) {
  switch (label) {
    case 1: return gates::x();
    case 2: return gates::y();
    case 3: return gates::z();
    default: return GateMatrix::identity(2);
  }
}

void check_pair(int n, std::array<int, 2> q) {
  if (q[0] == q[1]) throw IndexError("tomography qubits must differ");
  for (int v : q) {
    if (v < 0 || v >= n) throw IndexError("tomography qubit out of range");
  }
}

}  // namespace

Eigen::Matrix4cd reconstruct_2q(const std::array<double, 16>& pauli) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const auto& s = paulis();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double coeff = pauli[static_cast<std::size_t>(a * 4 + b)] / 4.0;
      // local index bit(first) + 2 bit(second): the second qubit is the high factor
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) rho(r, c) += coeff * s[b](r >> 1, c >> 1) * s[a](r & 1, c & 1);
    }
  }
  return rho;
}

TomographyResult tomography_2q(const Circuit& circuit, const NoiseModel& noise,
                               std::array<int, 2> qubits, int shots, int reps,
                               std::uint64_t seed) {
  check_pair(circuit.n_qubits(), qubits);
  TomographyResult t;
  t.qubits = qubits;
  t.pauli[0] = 1.0;
  t.pauli_stderr[0] = 0.0;
  // Setting (b0, b1) measures X/Y/Z = 1/2/3 on each qubit; the appended
  // rotation maps that basis to Z.
  std::array<ShotBatch, 16> batches;
  for (int b0 = 1; b0 <= 3; ++b0) {
    for (int b1 = 1; b1 <= 3; ++b1) {
      Circuit c = circuit;
      const std::array<int, 2> bases{b0, b1};
      for (int k = 0; k < 2; ++k) {
        if (bases[static_cast<std::size_t>(k)] == 1) {
          c.add(gates::h(), {qubits[static_cast<std::size_t>(k)]});
        } else if (bases[static_cast<std::size_t>(k)] == 2) {
          c.add(gates::diag(1.0, Complex{0.0, -1.0}), {qubits[static_cast<std::size_t>(k)]});
          c.add(gates::h(), {qubits[static_cast<std::size_t>(k)]});
        }
      }
      batches[static_cast<std::size_t>(b0 * 4 + b1)] =
          run_noisy(c, noise, shots, reps, derive_seed(seed, static_cast<std::uint64_t>(b0 * 4 + b1)));
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      const int setting = (a == 0 ? 3 : a) * 4 + (b == 0 ? 3 : b);
      const int q0 = qubits[0];
      const int q1 = qubits[1];
      const Estimate e = estimate_diagonal(batches[static_cast<std::size_t>(setting)], [&](Index x) {
        double v = 1.0;
        if (a != 0 && ((x >> q0) & 1U)) v = -v;
        if (b != 0 && ((x >> q1) & 1U)) v = -v;
        return v;
      });
      t.pauli[static_cast<std::size_t>(a * 4 + b)] = e.mean;
      t.pauli_stderr[static_cast<std::size_t>(a * 4 + b)] = e.std_error;
    }
  }
  t.raw = reconstruct_2q(t.pauli);
  t.mitigated = 0.5 * (t.raw.real() + t.raw.real().transpose());
  return t;
}

TomographyResult tomography_2q_exact(const StateVector& state, std::array<int, 2> qubits) {
  check_pair(state.n_qubits(), qubits);
  TomographyResult t;
  t.qubits = qubits;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      StateVector phi = apply_gate(state, pauli_gate(a), {qubits[0]});
      phi = apply_gate(std::move(phi), pauli_gate(b), {qubits[1]});
      t.pauli[static_cast<std::size_t>(a * 4 + b)] = inner_product(state, phi).real();
    }
  }
  t.raw = reconstruct_2q(t.pauli);
  t.mitigated = 0.5 * (t.raw.real() + t.raw.real().transpose());
  return t;
}

EntanglementSpectrum mitigated_spectrum(const TomographyResult& t) {
  return entanglement_spectrum(Eigen::MatrixXcd(t.mitigated.cast<Complex>()),
                               {t.qubits[0], t.qubits[1]});
}

Circuit hardware_circuit(const Circuit& circuit, std::span<const double> params) {
  Circuit out(circuit.n_qubits());
  for (const GateOp& op : circuit.ops()) {
    if (op.kind == OpKind::EswapSlot) {
      if (op.slot >= params.size()) throw ShapeError("parameter slot out of range");
      out.append_mapped(gates::eswap_decomposed(params[op.slot]), {op.targets[0], op.targets[1]},
                        op.layer);
    } else {
      GateOp fixed = op;
      fixed.matrix = resolve(op, params);
      fixed.kind = OpKind::Fixed;
      out.insert(out.size(), fixed);
    }
  }
  return out;
}

}  // namespace sptvqe
