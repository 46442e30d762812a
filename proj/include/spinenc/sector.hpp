#pragma once

// Exchange-only circuits (the Dicke Trotter step) conserve Hamming weight, so
// states can be propagated inside one weight sector, several at a time.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "spinenc/errors.hpp"
#include "spinenc/pauli.hpp"
#include "spinenc/spincore.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"

namespace spinenc {

struct ExchangeGate {
  int k;
  int l;
  double theta;  // exp(-i theta (XX + YY + ZZ))
};

// Reads a step circuit that consists only of ZZ/YY/XX triples.
inline std::vector<ExchangeGate> exchange_gates(const Circuit& step) {
  std::vector<ExchangeGate> out;
  for (std::size_t i = 0; i < step.gates.size(); i += 3) {
    require(is_exchange_triple(step.gates, i), "exchange_gates: step is not made of exchange triples");
    const auto& g = std::get<PauliRotation>(step.gates[i]);
    const std::uint64_t s = g.string.support();
    out.push_back({std::countr_zero(s), 63 - std::countl_zero(s), g.angle});
  }
  return out;
}

using SectorBatch = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class ExchangeSector {
 public:
  ExchangeSector(int nQubits, int weight) : n_{nQubits}, w_{weight} {
    require(nQubits >= 1 && nQubits <= 30, "exchange sector: qubit count out of range");
    require(weight >= 0 && weight <= nQubits, "exchange sector: weight out of range");
    position_.assign(std::size_t{1} << nQubits, -1);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << nQubits); ++r)
      if (std::popcount(r) == weight) {
        position_[r] = static_cast<std::int64_t>(states_.size());
        states_.push_back(r);
      }
  }

  int qubits() const { return n_; }
  int weight() const { return w_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<std::uint64_t>& states() const { return states_; }
  std::int64_t position(std::uint64_t index) const { return position_.at(index); }

  // Sector rows swapped by an exchange on (k, l): bit k set, bit l clear, and
  // the partner.
  const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs(int k, int l) {
    auto key = std::make_pair(std::min(k, l), std::max(k, l));
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> list;
    const std::uint64_t bk = std::uint64_t{1} << key.first, bl = std::uint64_t{1} << key.second;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const std::uint64_t r = states_[i];
      if ((r & bk) && !(r & bl)) list.emplace_back(static_cast<Eigen::Index>(i), position_[r ^ bk ^ bl]);
    }
    return pairs_.emplace(key, std::move(list)).first->second;
  }

  // Applies the gates to every column, up to the global phase e^{-i theta}
  // per gate.
  void apply(SectorBatch& batch, const std::vector<ExchangeGate>& gates) {
    const Eigen::Index cols = batch.cols();
    for (const auto& g : gates) {
      const cplx e = std::exp(cplx{0.0, 4.0 * g.theta});
      const cplx c = 0.5 * (1.0 + e), s = 0.5 * (1.0 - e);
      for (const auto& [i, j] : pairs(g.k, g.l)) {
        cplx* a = batch.row(i).data();
        cplx* b = batch.row(j).data();
        for (Eigen::Index col = 0; col < cols; ++col) {
          const cplx x = a[col], y = b[col];
          a[col] = c * x + s * y;
          b[col] = s * x + c * y;
        }
      }
    }
  }

 private:
  int n_;
  int w_;
  std::vector<std::uint64_t> states_;
  std::vector<std::int64_t> position_;
  std::map<std::pair<int, int>, std::vector<std::pair<Eigen::Index, Eigen::Index>>> pairs_;
};

}  // namespace spinenc
