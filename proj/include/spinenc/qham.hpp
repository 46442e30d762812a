#pragma once

// Encoded Heisenberg Hamiltonians for the four mappings, term statistics and
// the compact-mapping term-count scaling study.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/fitting.hpp"
#include "spinenc/pauli.hpp"
#include "spinenc/spincore.hpp"

namespace spinenc {

// Desk limit on the encoded register of compact and direct Hamiltonians.
inline constexpr int kMaxEncodedQubits = 24;

// Sz, Sx, Sy of one site as Pauli sums on the site's K_q qubits.
struct SitePauliOperators {
  PauliSum sz, sx, sy;
};

// Spin matrices zero-padded to 2^K_q and decomposed. Unused binary patterns
// get no weight.
inline SitePauliOperators compact_site_operators(Spin spin) {
  const int K = qubits_per_site(EncodingKind::Compact, spin);
  require(K <= 6, "compact site operators: K_q = " + std::to_string(K) + " exceeds 6 qubits per site");
  const SpinMatrices sm = spin_matrices(spin);
  const Eigen::Index dim = Eigen::Index{1} << K, d = spin.levels();
  auto pad = [&](const ComplexMatrix& a) {
    ComplexMatrix b = ComplexMatrix::Zero(dim, dim);
    b.topLeftCorner(d, d) = a;
    return decompose_qubit_operator(b, K);
  };
  return {pad(sm.sz), pad(sm.sx()), pad(sm.sy())};
}

// One-hot operators written down directly:
//   Sz = -1/2 sum_l M_l Z_l            (n_l = (I - Z_l)/2, sum_l M_l = 0)
//   Sx = sum_l a_l (X_{l+1} X_l + Y_{l+1} Y_l) / 4
//   Sy = sum_l a_l (X_{l+1} Y_l - Y_{l+1} X_l) / 4
// with a_l = <l+1|S^+|l>. Valid on the one-hot subspace.
inline SitePauliOperators direct_site_operators(Spin spin) {
  const int K = spin.levels();
  SitePauliOperators ops{PauliSum(K), PauliSum(K), PauliSum(K)};
  auto two = [K](int hi, char ch, int lo, char cl) {
    std::string s(K, 'I');
    s[K - 1 - hi] = ch;
    s[K - 1 - lo] = cl;
    return PauliString::parse(s);
  };
  for (int l = 0; l < K; ++l) {
    const int twoM = spin.twice_m_of_level(l);
    if (twoM != 0) ops.sz.add(-0.25 * twoM, PauliString(K, 0, std::uint64_t{1} << l));
    if (l + 1 < K) {
      const double a = raising_amplitude(spin, twoM) / 4.0;
      ops.sx.add(a, two(l + 1, 'X', l, 'X'));
      ops.sx.add(a, two(l + 1, 'Y', l, 'Y'));
      ops.sy.add(a, two(l + 1, 'X', l, 'Y'));
      ops.sy.add(-a, two(l + 1, 'Y', l, 'X'));
    }
  }
  return ops;
}

// H = sum_edges sum_a S^a_m S^a_n from per-site sums; a runs over z, x, y.
inline PauliSum combine_site_operators(const Lattice& lattice, const SitePauliOperators& site, int kq) {
  const int width = kq * lattice.sites();
  PauliSum h(width);
  for (const auto& [m, n] : lattice.edges()) {
    for (const PauliSum* op : {&site.sz, &site.sx, &site.sy}) {
      for (const auto& p : op->terms()) {
        const PauliString pm = p.string.embedded(width, m * kq);
        for (const auto& q : op->terms()) h.add(p.coeff * q.coeff, pm.combined(q.string.embedded(width, n * kq)));
      }
    }
  }
  h.prune();
  return h;
}

inline void check_encoded_width(EncodingKind kind, const Lattice& lattice) {
  const long width = static_cast<long>(qubits_per_site(kind, lattice.spin())) * lattice.sites();
  if (width > kMaxEncodedQubits)
    throw ResourceError(to_string(kind) + " Hamiltonian for 2S=" + std::to_string(lattice.spin().twice()) +
                        " on " + std::to_string(lattice.sites()) + " sites needs " + std::to_string(width) +
                        " qubits (cap " + std::to_string(kMaxEncodedQubits) + ")");
}

inline PauliSum build_compact(const Lattice& lattice) {
  check_encoded_width(EncodingKind::Compact, lattice);
  const Spin spin = lattice.spin();
  return combine_site_operators(lattice, compact_site_operators(spin), qubits_per_site(EncodingKind::Compact, spin));
}

inline PauliSum build_direct(const Lattice& lattice) {
  check_encoded_width(EncodingKind::Direct, lattice);
  const Spin spin = lattice.spin();
  return combine_site_operators(lattice, direct_site_operators(spin), spin.levels());
}

// (1/4) sum_edges sum_{k in m} sum_{l in n} (Z_k Z_l + Y_k Y_l + X_k X_l),
// ordered by edge, then k, then l, then ZZ, YY, XX.
inline PauliSum build_dicke(const Lattice& lattice) {
  const int K = lattice.spin().twice();
  require(static_cast<long>(K) * lattice.sites() <= 64, "build_dicke: register wider than 64 qubits");
  const int width = K * lattice.sites();
  PauliSum h(width);
  for (const auto& [m, n] : lattice.edges())
    for (int k = m * K; k < (m + 1) * K; ++k)
      for (int l = n * K; l < (n + 1) * K; ++l) {
        const std::uint64_t mask = (std::uint64_t{1} << k) | (std::uint64_t{1} << l);
        h.add(0.25, PauliString(width, 0, mask));
        h.add(0.25, PauliString(width, mask, mask));
        h.add(0.25, PauliString(width, mask, 0));
      }
  return h;
}

// Per-site Gell-Mann expansion of Sz, Sx, Sy combined per edge. Terms of
// each edge are sorted by (index on the higher site, index on the lower).
inline GellMannSum build_qudit(const Lattice& lattice) {
  const Spin spin = lattice.spin();
  const int d = spin.levels();
  require(d <= 11, "build_qudit: d = 2S+1 must be <= 11");
  const SpinMatrices sm = spin_matrices(spin);
  const QuditDecomposition parts[3] = {decompose_qudit_operator(sm.sz), decompose_qudit_operator(sm.sx()),
                                       decompose_qudit_operator(sm.sy())};
  GellMannSum h(d, lattice.sites());
  for (const auto& [m, n] : lattice.edges()) {
    GellMannSum edge(d, lattice.sites());
    for (const auto& part : parts)
      for (const auto& a : part.components)
        for (const auto& b : part.components) {
          std::vector<int> ops(lattice.sites(), 1);
          ops[m] = a.index;
          ops[n] = b.index;
          edge.add(a.coeff * b.coeff, GellMannString(d, std::move(ops)));
        }
    edge.prune();
    edge.sort();
    for (const auto& t : edge.terms()) h.add(t.coeff, t.string);
  }
  h.prune();
  return h;
}

struct HamiltonianStats {
  std::size_t L = 0;
  std::size_t LMultiq = 0;
  std::map<int, std::size_t> weightHistogram;
};

namespace detail {
template <class Terms>
HamiltonianStats stats_from(const Terms& terms) {
  HamiltonianStats s;
  for (const auto& t : terms) {
    const int w = t.string.weight();
    ++s.weightHistogram[w];
    ++s.L;
    if (w > 2) ++s.LMultiq;
  }
  return s;
}
}  // namespace detail

inline HamiltonianStats term_stats(const PauliSum& sum) { return detail::stats_from(sum.terms()); }
inline HamiltonianStats term_stats(const GellMannSum& sum) { return detail::stats_from(sum.terms()); }

inline std::string format_histogram(const HamiltonianStats& s) {
  std::string out;
  for (const auto& [w, c] : s.weightHistogram) {
    if (!out.empty()) out += ' ';
    out += std::to_string(w) + ":" + std::to_string(c);
  }
  return out;
}

// L_compact of the two-site lattice, built site by site.
inline std::size_t compact_term_count(Spin spin) {
  const int K = qubits_per_site(EncodingKind::Compact, spin);
  if (K > 6) throw ResourceError("compact_term_count: K_q = " + std::to_string(K) + " exceeds 6 qubits per site");
  return build_compact(Lattice::open_chain(2, spin)).size();
}

inline double central_spin(int kq) { return kq == 1 ? 0.5 : 3.0 * std::pow(2.0, kq - 3) - 0.5; }

struct CompactScalingStudy {
  std::vector<std::pair<int, std::size_t>> perS;  // (2S, L_compact)
  ScalingFit fitPower;                            // L at 2S + 1 = 2^K_q
  ScalingFit fitAveraged;                         // mean L per K_q against S_c
  std::vector<std::pair<double, double>> averaged;  // (S_c, mean L)
};

// Both fits are least squares on L itself (see fit_power_law_nonlinear).
// The per-K_q mean runs over 2S = 2^{K_q-1} .. 2^{K_q} - 2, i.e. every S of
// that width except the fully used one; K_q = 1 has only S = 1/2.
inline CompactScalingStudy compact_scaling_study(const std::vector<int>& twoSValues) {
  require(!twoSValues.empty(), "compact_scaling_study: empty S range");
  CompactScalingStudy study;
  std::map<int, std::size_t> byTwoS;
  for (int twoS : twoSValues) {
    const std::size_t L = compact_term_count(Spin{twoS});
    byTwoS[twoS] = L;
    study.perS.emplace_back(twoS, L);
  }
  std::vector<double> x1, y1, x2, y2;
  for (int kq = 1; kq <= 6; ++kq) {
    const int full = (1 << kq) - 1;
    if (auto it = byTwoS.find(full); it != byTwoS.end()) {
      x1.push_back(0.5 * full);
      y1.push_back(static_cast<double>(it->second));
    }
    double acc = 0.0;
    int count = 0;
    bool complete = true;
    if (kq == 1) {
      complete = byTwoS.count(1) > 0;
      if (complete) acc = static_cast<double>(byTwoS[1]), count = 1;
    } else {
      for (int twoS = 1 << (kq - 1); twoS <= (1 << kq) - 2; ++twoS) {
        auto it = byTwoS.find(twoS);
        if (it == byTwoS.end()) {
          complete = false;
          break;
        }
        acc += static_cast<double>(it->second);
        ++count;
      }
    }
    if (complete && count > 0) {
      x2.push_back(central_spin(kq));
      y2.push_back(acc / count);
      study.averaged.emplace_back(central_spin(kq), acc / count);
    }
  }
  if (x1.size() >= 2) study.fitPower = fit_power_law_nonlinear(x1, y1);
  if (x2.size() >= 2) study.fitAveraged = fit_power_law_nonlinear(x2, y2);
  return study;
}

inline nlohmann::json hamiltonian_json(const PauliSum& sum, EncodingKind kind, const Lattice& lattice) {
  nlohmann::json j;
  j["mapping"] = to_string(kind);
  j["twoS"] = lattice.spin().twice();
  j["S"] = lattice.spin().value();
  j["nSites"] = lattice.sites();
  j["edges"] = lattice.edges();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : sum.terms()) terms.push_back({{"coeff", t.coeff}, {"string", t.string.to_string()}});
  j["terms"] = terms;
  j["offset"] = sum.offset();
  return j;
}

inline nlohmann::json hamiltonian_json(const GellMannSum& sum, const Lattice& lattice) {
  nlohmann::json j;
  j["mapping"] = "qudit";
  j["twoS"] = lattice.spin().twice();
  j["S"] = lattice.spin().value();
  j["nSites"] = lattice.sites();
  j["edges"] = lattice.edges();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : sum.terms()) terms.push_back({{"coeff", t.coeff}, {"string", t.string.to_string()}});
  j["terms"] = terms;
  j["offset"] = sum.offset();
  return j;
}

}  // namespace spinenc
