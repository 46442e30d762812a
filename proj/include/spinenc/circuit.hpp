#pragma once

#include <cstdio>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "spinenc/errors.hpp"
#include "spinenc/pauli.hpp"

namespace spinenc {

// exp(-i angle P)
struct PauliRotation {
  double angle;
  PauliString string;
};

// exp(-i angle Gamma) on a qudit register
struct QuditRotation {
  double angle;
  GellMannString string;
};

// U_Dicke (or its inverse) on the 2S qubits starting at firstQubit.
struct DickePrep {
  int site;
  int firstQubit;
  int twoS;
  bool inverse;
};

struct BitFlip {
  int qubit;
};

struct LevelSet {
  int site;
  int level;
};

// RY(angle) on target when every control is |1>. RY(a) = exp(-i a Y / 2).
struct ControlledRY {
  int target;
  double angle;
  std::vector<int> controls;
};

struct CNOT {
  int control;
  int target;
};

using Gate = std::variant<PauliRotation, QuditRotation, DickePrep, BitFlip, LevelSet, ControlledRY, CNOT>;

struct Circuit {
  int width = 0;  // qubits, or qudits for qudit circuits
  std::vector<Gate> gates;

  void append(Gate g) { gates.push_back(std::move(g)); }
  void append(const Circuit& other) {
    require(other.width == width, "circuit: width mismatch on append");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }
};

namespace detail {
inline std::string fmt_angle(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", a);
  return buf;
}
}  // namespace detail

// One line per gate; Pauli rotations print as "ROT angle STRING".
inline std::string dump_circuit(const Circuit& c) {
  std::string out;
  for (const auto& g : c.gates) {
    std::visit(
        [&out](const auto& gate) {
          using T = std::decay_t<decltype(gate)>;
          if constexpr (std::is_same_v<T, PauliRotation>) {
            out += "ROT " + detail::fmt_angle(gate.angle) + " " + gate.string.to_string();
          } else if constexpr (std::is_same_v<T, QuditRotation>) {
            out += "QROT " + detail::fmt_angle(gate.angle) + " " + gate.string.to_string();
          } else if constexpr (std::is_same_v<T, DickePrep>) {
            out += std::string(gate.inverse ? "DICKE_INV " : "DICKE ") + std::to_string(gate.site);
          } else if constexpr (std::is_same_v<T, BitFlip>) {
            out += "X " + std::to_string(gate.qubit);
          } else if constexpr (std::is_same_v<T, LevelSet>) {
            out += "LEVEL " + std::to_string(gate.site) + " " + std::to_string(gate.level);
          } else if constexpr (std::is_same_v<T, ControlledRY>) {
            out += "CRY " + detail::fmt_angle(gate.angle) + " " + std::to_string(gate.target);
            for (int q : gate.controls) out += " " + std::to_string(q);
          } else {
            out += "CX " + std::to_string(gate.control) + " " + std::to_string(gate.target);
          }
        },
        g);
    out += '\n';
  }
  return out;
}

}  // namespace spinenc
