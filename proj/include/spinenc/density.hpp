#pragma once

// Density-matrix execution with pair-depolarizing noise, for qudit circuits
// and (as a generic stand-in for hardware noise) qubit circuits.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spinenc/circuit.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/pauli.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"

namespace spinenc {

inline constexpr std::uint64_t kMaxQuditDensityDim = 4096;
inline constexpr int kMaxDensityQubits = 12;

using DensityMatrix = ComplexMatrix;

// Mixed-radix register: `units` subsystems of `radix` levels, unit 0 least
// significant.
struct Register {
  int radix;
  int units;

  std::uint64_t dim() const {
    std::uint64_t d = 1;
    for (int u = 0; u < units; ++u) d *= static_cast<std::uint64_t>(radix);
    return d;
  }
  std::uint64_t stride(int unit) const {
    std::uint64_t s = 1;
    for (int u = 0; u < unit; ++u) s *= static_cast<std::uint64_t>(radix);
    return s;
  }
  int digit(std::uint64_t index, int unit) const { return static_cast<int>((index / stride(unit)) % radix); }
};

namespace detail {

// Base indices with zero digits on the given units, plus the offsets of the
// local configurations (first listed unit most significant).
struct Subsystem {
  std::vector<std::uint64_t> bases;
  std::vector<std::uint64_t> offsets;
};

inline Subsystem subsystem(const Register& reg, const std::vector<int>& units) {
  Subsystem s;
  const std::uint64_t dim = reg.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    bool zero = true;
    for (int u : units) zero = zero && reg.digit(i, u) == 0;
    if (zero) s.bases.push_back(i);
  }
  std::uint64_t local = 1;
  for (std::size_t k = 0; k < units.size(); ++k) local *= static_cast<std::uint64_t>(reg.radix);
  s.offsets.resize(local);
  for (std::uint64_t p = 0; p < local; ++p) {
    std::uint64_t rem = p, off = 0;
    for (auto it = units.rbegin(); it != units.rend(); ++it) {
      off += (rem % reg.radix) * reg.stride(*it);
      rem /= reg.radix;
    }
    s.offsets[p] = off;
  }
  return s;
}

// v <- U v on the subsystem, for each column of m.
inline void apply_local_left(ComplexMatrix& m, const Subsystem& sub, const ComplexMatrix& u) {
  const auto local = static_cast<Eigen::Index>(sub.offsets.size());
  ComplexVector buf(local), out(local);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    cplx* v = m.col(col).data();
    for (std::uint64_t base : sub.bases) {
      for (Eigen::Index p = 0; p < local; ++p) buf(p) = v[base + sub.offsets[p]];
      out.noalias() = u * buf;
      for (Eigen::Index p = 0; p < local; ++p) v[base + sub.offsets[p]] = out(p);
    }
  }
}

}  // namespace detail

// rho <- U rho U^dagger, with U given by a left-action callback on columns.
template <class LeftAction>
void conjugate(DensityMatrix& rho, LeftAction&& left) {
  left(rho);
  rho.adjointInPlace();
  left(rho);
  rho.adjointInPlace();
}

// rho <- (1 - eps) rho + eps Tr_pair(rho) (x) I / d^2 on units a, b.
inline void depolarize_pair(DensityMatrix& rho, const Register& reg, int a, int b, double eps) {
  if (eps <= 0.0) return;
  require(a != b && a >= 0 && b >= 0 && a < reg.units && b < reg.units, "depolarize_pair: bad units");
  const auto sub = detail::subsystem(reg, {a, b});
  const double mix = eps / static_cast<double>(sub.offsets.size());
  for (std::uint64_t b1 : sub.bases)
    for (std::uint64_t b2 : sub.bases) {
      cplx tr = 0.0;
      for (std::uint64_t off : sub.offsets) tr += rho(static_cast<Eigen::Index>(b1 + off), static_cast<Eigen::Index>(b2 + off));
      for (std::uint64_t o1 : sub.offsets)
        for (std::uint64_t o2 : sub.offsets) {
          cplx& e = rho(static_cast<Eigen::Index>(b1 + o1), static_cast<Eigen::Index>(b2 + o2));
          e = (1.0 - eps) * e + (o1 == o2 ? mix * tr : cplx{0.0});
        }
    }
}

// ---------------------------------------------------------------------------
// Qudits

// exp(-i angle Gamma) restricted to Gamma's support, with the support's
// highest site as the most significant local factor.
inline ComplexMatrix qudit_local_unitary(const QuditRotation& g) {
  const auto support = g.string.support();
  const int d = g.string.levels();
  ComplexMatrix op = ComplexMatrix::Identity(1, 1);
  for (auto it = support.rbegin(); it != support.rend(); ++it) op = kron(op, gell_mann(d, g.string.op(*it)));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op);
  ComplexVector ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(cplx{0.0, -g.angle * es.eigenvalues()(k)});
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Swaps levels 0 and l of one qudit, so |0> becomes |l>.
inline ComplexMatrix level_set_unitary(int d, int level) {
  require(level >= 0 && level < d, "level set: level out of range");
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  if (level != 0) {
    u(0, 0) = u(level, level) = 0.0;
    u(0, level) = u(level, 0) = 1.0;
  }
  return u;
}

class QuditExecutor {
 public:
  QuditExecutor(int d, int nSites) : reg_{d, nSites} {}

  const Register& reg() const { return reg_; }

  // Left action of one gate on every column of m. Returns the sites touched.
  std::vector<int> left(ComplexMatrix& m, const Gate& gate) {
    if (const auto* g = std::get_if<QuditRotation>(&gate)) {
      require(g->string.levels() == reg_.radix && g->string.sites() == reg_.units, "qudit executor: gate shape mismatch");
      auto support = g->string.support();
      if (support.empty()) return {};
      std::vector<int> units(support.rbegin(), support.rend());
      detail::apply_local_left(m, sub(units), unitary(*g));
      return support;
    }
    if (const auto* g = std::get_if<LevelSet>(&gate)) {
      require(g->site >= 0 && g->site < reg_.units, "qudit executor: level-set site out of range");
      detail::apply_local_left(m, sub({g->site}), level_set_unitary(reg_.radix, g->level));
      return {};
    }
    throw ValidationError("qudit executor: qubit gate in a qudit circuit");
  }

 private:
  const detail::Subsystem& sub(const std::vector<int>& units) {
    auto it = subs_.find(units);
    if (it == subs_.end()) it = subs_.emplace(units, detail::subsystem(reg_, units)).first;
    return it->second;
  }
  const ComplexMatrix& unitary(const QuditRotation& g) {
    auto key = std::make_pair(g.string.ops(), g.angle);
    auto it = unitaries_.find(key);
    if (it == unitaries_.end()) it = unitaries_.emplace(key, qudit_local_unitary(g)).first;
    return it->second;
  }

  Register reg_;
  std::map<std::vector<int>, detail::Subsystem> subs_;
  std::map<std::pair<std::vector<int>, double>, ComplexMatrix> unitaries_;
};

inline void check_qudit_density_dim(std::uint64_t dim) {
  if (dim > kMaxQuditDensityDim)
    throw ResourceError("qudit density: dimension " + std::to_string(dim) + " exceeds cap of " +
                        std::to_string(kMaxQuditDensityDim));
}

// Applies the circuit to rho; after each two-qudit gate the pair is
// depolarized with probability eps.
inline void apply_density_qudit(DensityMatrix& rho, QuditExecutor& ex, const Circuit& circuit, const NoiseConfig& noise) {
  for (const auto& gate : circuit.gates) {
    std::vector<int> touched;
    conjugate(rho, [&](ComplexMatrix& m) { touched = ex.left(m, gate); });
    if (touched.size() == 2) depolarize_pair(rho, ex.reg(), touched[0], touched[1], noise.strength());
  }
}

inline DensityMatrix run_density_qudit(const Circuit& circuit, const LatticeBasisState& initial, const NoiseConfig& noise) {
  const Register reg{initial.spin().levels(), initial.sites()};
  check_qudit_density_dim(reg.dim());
  require(circuit.width == initial.sites(), "run_density_qudit: circuit width does not match site count");
  const auto dim = static_cast<Eigen::Index>(reg.dim());
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  const auto i0 = static_cast<Eigen::Index>(initial.index());
  rho(i0, i0) = 1.0;
  QuditExecutor ex(reg.radix, reg.units);
  apply_density_qudit(rho, ex, circuit, noise);
  return rho;
}

// Pure-state qudit run (no noise), for references.
inline ComplexVector run_statevector_qudit(const Circuit& circuit, const LatticeBasisState& initial) {
  const Register reg{initial.spin().levels(), initial.sites()};
  check_qudit_density_dim(reg.dim());
  ComplexMatrix psi = basis_vector(reg.dim(), initial.index());
  QuditExecutor ex(reg.radix, reg.units);
  for (const auto& gate : circuit.gates) ex.left(psi, gate);
  return psi.col(0);
}

// ---------------------------------------------------------------------------
// Qubits

// Pairs hit by depolarizing events for one gate:
//   weight-w Pauli rotation (w >= 2): a CNOT ladder up and down the support,
//     2w - 3 events on consecutive support pairs;
//   CNOT: 1; singly controlled RY: 2; doubly controlled RY: 4;
//   single-qubit gates: none.
inline std::vector<std::pair<int, int>> noise_events(const Gate& gate) {
  std::vector<std::pair<int, int>> ev;
  if (const auto* g = std::get_if<PauliRotation>(&gate)) {
    std::vector<int> q;
    for (int i = 0; i < g->string.width(); ++i)
      if ((g->string.support() >> i) & 1U) q.push_back(i);
    const int w = static_cast<int>(q.size());
    if (w < 2) return ev;
    for (int i = 0; i + 1 < w; ++i) ev.emplace_back(q[i], q[i + 1]);
    for (int i = w - 3; i >= 0; --i) ev.emplace_back(q[i], q[i + 1]);
  } else if (const auto* g = std::get_if<CNOT>(&gate)) {
    ev.emplace_back(g->control, g->target);
  } else if (const auto* g = std::get_if<ControlledRY>(&gate)) {
    if (g->controls.size() == 1) {
      ev.emplace_back(g->controls[0], g->target);
      ev.emplace_back(g->controls[0], g->target);
    } else if (g->controls.size() == 2) {
      for (int r = 0; r < 2; ++r) {
        ev.emplace_back(g->controls[0], g->target);
        ev.emplace_back(g->controls[1], g->target);
      }
    } else {
      for (int c : g->controls) ev.emplace_back(c, g->target);
    }
  }
  return ev;
}

// Replaces Dicke-prep gates with their elementary gates.
inline Circuit expand_dicke(const Circuit& c) {
  Circuit out;
  out.width = c.width;
  for (const auto& gate : c.gates) {
    if (const auto* g = std::get_if<DickePrep>(&gate)) {
      Circuit sub = dicke_circuit(Spin{g->twoS}, g->firstQubit, c.width);
      if (g->inverse) sub = inverse_circuit(sub);
      out.append(sub);
    } else {
      out.append(gate);
    }
  }
  return out;
}

inline void check_density_qubits(int width) {
  if (width > kMaxDensityQubits)
    throw ResourceError("qubit density: " + std::to_string(width) + " qubits exceeds cap of " +
                        std::to_string(kMaxDensityQubits));
}

inline void apply_density_qubit(DensityMatrix& rho, const Circuit& circuit, const NoiseConfig& noise) {
  check_density_qubits(circuit.width);
  const std::uint64_t dim = std::uint64_t{1} << circuit.width;
  require(static_cast<std::uint64_t>(rho.rows()) == dim, "qubit density: matrix size does not match width");
  const Register reg{2, circuit.width};
  const Circuit flat = expand_dicke(circuit);
  for (const auto& gate : flat.gates) {
    conjugate(rho, [&](ComplexMatrix& m) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) apply_qubit_gate(m.col(col).data(), dim, circuit.width, gate);
    });
    if (noise.strength() > 0.0)
      for (const auto& [a, b] : noise_events(gate)) depolarize_pair(rho, reg, a, b, noise.strength());
  }
}

inline DensityMatrix run_density_qubit(const Circuit& circuit, const Bitstring& initial, const NoiseConfig& noise) {
  check_density_qubits(circuit.width);
  require(initial.width() == circuit.width, "run_density_qubit: initial width mismatch");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << circuit.width);
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  rho(static_cast<Eigen::Index>(initial.value()), static_cast<Eigen::Index>(initial.value())) = 1.0;
  apply_density_qubit(rho, circuit, noise);
  return rho;
}

inline Eigen::VectorXd diagonal_probabilities(const DensityMatrix& rho) { return rho.diagonal().real(); }

}  // namespace spinenc
