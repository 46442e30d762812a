#pragma once

// Dense state-vector execution of qubit circuits.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "spinenc/circuit.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/spincore.hpp"

namespace spinenc {

inline constexpr int kMaxStatevectorQubits = 21;

namespace kernels {

// Index of the i-th basis state whose bit `pos` is 0.
inline std::uint64_t insert_zero(std::uint64_t i, int pos) {
  const std::uint64_t low = i & ((std::uint64_t{1} << pos) - 1);
  return ((i >> pos) << (pos + 1)) | low;
}

// exp(-i theta P) = cos(theta) - i sin(theta) P, in place.
inline void pauli_rotation(cplx* psi, std::uint64_t dim, double theta, const PauliString& p) {
  const double c = std::cos(theta), s = std::sin(theta);
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  if (x == 0) {
    const cplx even{c, -s}, odd{c, s};
    for (std::uint64_t r = 0; r < dim; ++r) psi[r] *= (std::popcount(r & z) & 1) ? odd : even;
    return;
  }
  const int hi = 63 - std::countl_zero(x);
  const cplx mis{0.0, -s};
  for (std::uint64_t i = 0; i < dim / 2; ++i) {
    const std::uint64_t r = insert_zero(i, hi), t = r ^ x;
    const cplx a = psi[r], b = psi[t];
    psi[r] = c * a + mis * p.phase(t) * b;
    psi[t] = c * b + mis * p.phase(r) * a;
  }
}

// exp(-i theta (XX + YY + ZZ)) on qubits k, l; XX+YY+ZZ = 2 SWAP - I.
inline void exchange(cplx* psi, std::uint64_t dim, int k, int l, double theta) {
  const int lo = std::min(k, l), hi = std::max(k, l);
  const std::uint64_t bk = std::uint64_t{1} << k, bl = std::uint64_t{1} << l;
  const cplx same = std::exp(cplx{0.0, -theta});
  const cplx g = std::exp(cplx{0.0, theta});
  const cplx stay = g * std::cos(2 * theta), swap = g * cplx{0.0, -std::sin(2 * theta)};
  for (std::uint64_t i = 0; i < dim / 4; ++i) {
    const std::uint64_t r = insert_zero(insert_zero(i, lo), hi);
    const cplx a = psi[r | bk], b = psi[r | bl];
    psi[r] *= same;
    psi[r | bk | bl] *= same;
    psi[r | bk] = stay * a + swap * b;
    psi[r | bl] = stay * b + swap * a;
  }
}

inline void bit_flip(cplx* psi, std::uint64_t dim, int q) {
  const std::uint64_t b = std::uint64_t{1} << q;
  for (std::uint64_t i = 0; i < dim / 2; ++i) {
    const std::uint64_t r = insert_zero(i, q);
    std::swap(psi[r], psi[r | b]);
  }
}

inline void cnot(cplx* psi, std::uint64_t dim, int control, int target) {
  const std::uint64_t bc = std::uint64_t{1} << control, bt = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < dim / 2; ++i) {
    const std::uint64_t r = insert_zero(i, target);
    if (r & bc) std::swap(psi[r], psi[r | bt]);
  }
}

inline void controlled_ry(cplx* psi, std::uint64_t dim, int target, double angle, const std::vector<int>& controls) {
  std::uint64_t cmask = 0;
  for (int q : controls) cmask |= std::uint64_t{1} << q;
  const std::uint64_t bt = std::uint64_t{1} << target;
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  for (std::uint64_t i = 0; i < dim / 2; ++i) {
    const std::uint64_t r = insert_zero(i, target);
    if ((r & cmask) != cmask) continue;
    const cplx a = psi[r], b = psi[r | bt];
    psi[r] = c * a - s * b;
    psi[r | bt] = s * a + c * b;
  }
}

}  // namespace kernels

// Three rotations with one angle, one two-qubit support and the ZZ, YY, XX
// strings commute and multiply to an exchange gate.
inline bool is_exchange_triple(const std::vector<Gate>& gates, std::size_t i) {
  if (i + 2 >= gates.size()) return false;
  const auto* a = std::get_if<PauliRotation>(&gates[i]);
  const auto* b = std::get_if<PauliRotation>(&gates[i + 1]);
  const auto* c = std::get_if<PauliRotation>(&gates[i + 2]);
  if (!a || !b || !c) return false;
  const std::uint64_t s = a->string.support();
  if (std::popcount(s) != 2 || b->string.support() != s || c->string.support() != s) return false;
  if (a->angle != b->angle || a->angle != c->angle) return false;
  int seen = 0;
  for (const auto* g : {a, b, c}) {
    const std::uint64_t x = g->string.x_mask(), z = g->string.z_mask();
    if (x == 0 && z == s) seen |= 1;
    else if (x == s && z == s) seen |= 2;
    else if (x == s && z == 0) seen |= 4;
  }
  return seen == 7;
}

inline void apply_dicke_prep(cplx* psi, std::uint64_t dim, int width, const DickePrep& g);

// Applies one qubit gate. Qudit gates are rejected.
inline void apply_qubit_gate(cplx* psi, std::uint64_t dim, int width, const Gate& gate) {
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PauliRotation>) {
          require(g.string.width() == width, "statevector: Pauli string width mismatch");
          kernels::pauli_rotation(psi, dim, g.angle, g.string);
        } else if constexpr (std::is_same_v<T, BitFlip>) {
          require(g.qubit >= 0 && g.qubit < width, "statevector: bit flip out of range");
          kernels::bit_flip(psi, dim, g.qubit);
        } else if constexpr (std::is_same_v<T, CNOT>) {
          require(g.control != g.target && g.control >= 0 && g.control < width && g.target >= 0 && g.target < width,
                  "statevector: bad CNOT qubits");
          kernels::cnot(psi, dim, g.control, g.target);
        } else if constexpr (std::is_same_v<T, ControlledRY>) {
          require(g.target >= 0 && g.target < width, "statevector: bad RY target");
          for (int q : g.controls) require(q >= 0 && q < width && q != g.target, "statevector: bad RY control");
          kernels::controlled_ry(psi, dim, g.target, g.angle, g.controls);
        } else if constexpr (std::is_same_v<T, DickePrep>) {
          apply_dicke_prep(psi, dim, width, g);
        } else {
          throw ValidationError("statevector: qudit gate in a qubit circuit");
        }
      },
      gate);
}

inline void apply_dicke_prep(cplx* psi, std::uint64_t dim, int width, const DickePrep& g) {
  Circuit c = dicke_circuit(Spin{g.twoS}, g.firstQubit, width);
  if (g.inverse) c = inverse_circuit(c);
  for (const auto& sub : c.gates) apply_qubit_gate(psi, dim, width, sub);
}

// Runs the circuit in place. Exchange triples are fused.
inline void apply_circuit(ComplexVector& psi, const Circuit& circuit) {
  const std::uint64_t dim = std::uint64_t{1} << circuit.width;
  require(static_cast<std::uint64_t>(psi.size()) == dim, "statevector: state size does not match circuit width");
  cplx* data = psi.data();
  const auto& gates = circuit.gates;
  for (std::size_t i = 0; i < gates.size();) {
    if (is_exchange_triple(gates, i)) {
      const auto& g = std::get<PauliRotation>(gates[i]);
      const std::uint64_t s = g.string.support();
      const int k = std::countr_zero(s), l = 63 - std::countl_zero(s);
      kernels::exchange(data, dim, k, l, g.angle);
      i += 3;
    } else {
      apply_qubit_gate(data, dim, circuit.width, gates[i]);
      ++i;
    }
  }
}

inline void check_statevector_width(int width) {
  if (width > kMaxStatevectorQubits)
    throw ResourceError("statevector: " + std::to_string(width) + " qubits exceeds cap of " +
                        std::to_string(kMaxStatevectorQubits));
  require(width >= 1, "statevector: width must be >= 1");
}

inline ComplexVector run_statevector(const Circuit& circuit, const Bitstring& initial) {
  check_statevector_width(circuit.width);
  require(initial.width() == circuit.width, "run_statevector: initial bitstring width mismatch");
  ComplexVector psi = basis_vector(std::uint64_t{1} << circuit.width, initial.value());
  apply_circuit(psi, circuit);
  return psi;
}

inline ComplexVector run_statevector(const Circuit& circuit, const ComplexVector& initial) {
  check_statevector_width(circuit.width);
  ComplexVector psi = initial;
  apply_circuit(psi, circuit);
  return psi;
}

// Dense unitary of a small circuit, column by column.
inline ComplexMatrix circuit_unitary(const Circuit& circuit) {
  require(circuit.width <= 12, "circuit_unitary: width too large");
  const std::uint64_t dim = std::uint64_t{1} << circuit.width;
  ComplexMatrix u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < dim; ++r) {
    ComplexVector col = basis_vector(dim, r);
    apply_circuit(col, circuit);
    u.col(static_cast<Eigen::Index>(r)) = col;
  }
  return u;
}

inline Eigen::VectorXd probabilities(const ComplexVector& psi) { return psi.cwiseAbs2(); }

}  // namespace spinenc
