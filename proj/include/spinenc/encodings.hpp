#pragma once

// The four site encodings (compact, direct, Dicke, qudit), decoding of
// measured register states, Dicke state vectors and the Dicke preparation
// circuit.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinenc/circuit.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/spincore.hpp"

namespace spinenc {

enum class EncodingKind { Compact, Direct, Dicke, Qudit };

inline std::string to_string(EncodingKind k) {
  switch (k) {
    case EncodingKind::Compact: return "compact";
    case EncodingKind::Direct: return "direct";
    case EncodingKind::Dicke: return "dicke";
    case EncodingKind::Qudit: return "qudit";
  }
  return "?";
}

inline EncodingKind parse_encoding(const std::string& name) {
  if (name == "compact") return EncodingKind::Compact;
  if (name == "direct") return EncodingKind::Direct;
  if (name == "dicke") return EncodingKind::Dicke;
  if (name == "qudit") return EncodingKind::Qudit;
  throw ValidationError("unknown mapping '" + name + "' (expected compact, direct, dicke or qudit)");
}

inline int ceil_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

inline int qubits_per_site(EncodingKind kind, Spin spin) {
  switch (kind) {
    case EncodingKind::Compact: return std::max(1, ceil_log2(spin.levels()));
    case EncodingKind::Direct: return spin.levels();
    case EncodingKind::Dicke: return spin.twice();
    case EncodingKind::Qudit: return 1;
  }
  return 0;
}

// Site n owns register units n*K_q .. (n+1)*K_q - 1. For qudits a unit is one
// (2S+1)-level qudit.
class EncodingLayout {
 public:
  EncodingLayout(EncodingKind kind, Spin spin, int nSites)
      : kind_{kind}, spin_{spin}, nSites_{nSites}, kq_{spinenc::qubits_per_site(kind, spin)} {
    require(nSites >= 1, "layout: need at least one site");
    if (kind != EncodingKind::Qudit)
      require(static_cast<long>(kq_) * nSites <= 64, "layout: register wider than 64 qubits");
  }

  EncodingKind kind() const { return kind_; }
  Spin spin() const { return spin_; }
  int sites() const { return nSites_; }
  int qubits_per_site() const { return kq_; }
  int width() const { return kq_ * nSites_; }
  bool is_qudit() const { return kind_ == EncodingKind::Qudit; }
  int unit_levels() const { return is_qudit() ? spin_.levels() : 2; }

  int first(int site) const { return site * kq_; }
  int last(int site) const { return (site + 1) * kq_ - 1; }

  std::uint64_t site_mask(int site) const {
    const std::uint64_t ones = kq_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << kq_) - 1;
    return ones << first(site);
  }

  // Register dimension, 2^width or d^N.
  std::uint64_t register_dim() const {
    if (!is_qudit()) return width() >= 64 ? UINT64_MAX : std::uint64_t{1} << width();
    std::uint64_t dim = 1;
    for (int n = 0; n < nSites_; ++n) dim *= static_cast<std::uint64_t>(spin_.levels());
    return dim;
  }

  nlohmann::json summary() const {
    nlohmann::json j;
    j["kind"] = to_string(kind_);
    j["twoS"] = spin_.twice();
    j["nSites"] = nSites_;
    j["unitsPerSite"] = kq_;
    j["unitLevels"] = unit_levels();
    nlohmann::json windows = nlohmann::json::array();
    for (int n = 0; n < nSites_; ++n) windows.push_back({first(n), last(n)});
    j["siteWindows"] = windows;
    return j;
  }

 private:
  EncodingKind kind_;
  Spin spin_;
  int nSites_;
  int kq_;
};

// A measured register state. Qubit 0 prints last.
class Bitstring {
 public:
  Bitstring(int width, std::uint64_t value) : width_{width}, value_{value} {
    require(width >= 1 && width <= 64, "bitstring: bad width");
    require(width == 64 || (value >> width) == 0, "bitstring: value exceeds width");
  }

  static Bitstring parse(const std::string& text) {
    require(!text.empty() && text.size() <= 64, "bitstring: bad length");
    std::uint64_t v = 0;
    for (char c : text) {
      require(c == '0' || c == '1', "bitstring: bad character");
      v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return {static_cast<int>(text.size()), v};
  }

  int width() const { return width_; }
  std::uint64_t value() const { return value_; }
  int bit(int q) const { return static_cast<int>((value_ >> q) & 1U); }

  std::string to_string() const {
    std::string s(width_, '0');
    for (int q = 0; q < width_; ++q) s[width_ - 1 - q] = bit(q) ? '1' : '0';
    return s;
  }

 private:
  int width_;
  std::uint64_t value_;
};

// Site pattern (qubit encodings) or level (qudit) for one magnetic number.
inline std::uint64_t encode_site(const EncodingLayout& layout, int twoM) {
  const Spin spin = layout.spin();
  const int level = spin.level_of(twoM);
  switch (layout.kind()) {
    case EncodingKind::Compact: return static_cast<std::uint64_t>(level);
    case EncodingKind::Direct: return std::uint64_t{1} << level;
    case EncodingKind::Dicke: {
      const int w = (spin.twice() - twoM) / 2;  // S - M
      return w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    }
    case EncodingKind::Qudit: return static_cast<std::uint64_t>(level);
  }
  return 0;
}

// Register basis index of a lattice state (Dicke: the seed, before U_Dicke).
inline std::uint64_t encode_state(const EncodingLayout& layout, const LatticeBasisState& state) {
  require(state.sites() == layout.sites(), "encode_state: site count mismatch");
  require(state.spin() == layout.spin(), "encode_state: spin mismatch");
  if (layout.is_qudit()) return state.index();
  std::uint64_t idx = 0;
  for (int n = 0; n < layout.sites(); ++n) idx |= encode_site(layout, state.twice_m(n)) << layout.first(n);
  return idx;
}

// How Dicke sites are read back. Seed: only the seed pattern |1_{S-M}> maps,
// which is what the register holds after U_Dicke^dagger. Weight: any pattern
// of Hamming weight w maps to M = S - w (reading the Dicke register directly).
enum class DickeDecode { Seed, Weight };

// twoM of one site pattern, or nothing for an unused pattern.
inline std::optional<int> decode_site(const EncodingLayout& layout, std::uint64_t pattern,
                                      DickeDecode rule = DickeDecode::Seed) {
  const Spin spin = layout.spin();
  switch (layout.kind()) {
    case EncodingKind::Compact:
    case EncodingKind::Qudit:
      if (pattern >= static_cast<std::uint64_t>(spin.levels())) return std::nullopt;
      return spin.twice_m_of_level(static_cast<int>(pattern));
    case EncodingKind::Direct:
      if (std::popcount(pattern) != 1) return std::nullopt;
      return spin.twice_m_of_level(std::countr_zero(pattern));
    case EncodingKind::Dicke: {
      const int w = std::popcount(pattern);
      if (rule == DickeDecode::Seed && pattern != (std::uint64_t{1} << w) - 1) return std::nullopt;
      return spin.twice() - 2 * w;
    }
  }
  return std::nullopt;
}

inline std::optional<LatticeBasisState> decode_basis_index(const EncodingLayout& layout, std::uint64_t index,
                                                           DickeDecode rule = DickeDecode::Seed) {
  std::vector<int> twoM(layout.sites());
  if (layout.is_qudit()) {
    if (index >= layout.register_dim()) return std::nullopt;
    return LatticeBasisState::from_index(layout.spin(), layout.sites(), index);
  }
  for (int n = 0; n < layout.sites(); ++n) {
    const std::uint64_t pattern = (index & layout.site_mask(n)) >> layout.first(n);
    const auto m = decode_site(layout, pattern, rule);
    if (!m) return std::nullopt;
    twoM[n] = *m;
  }
  return LatticeBasisState{layout.spin(), std::move(twoM)};
}

inline std::optional<LatticeBasisState> decode_bitstring(const EncodingLayout& layout, const Bitstring& bits,
                                                         DickeDecode rule = DickeDecode::Seed) {
  require(!layout.is_qudit(), "decode_bitstring: qudit layouts are decoded by level index");
  require(bits.width() == layout.width(), "decode_bitstring: width mismatch");
  return decode_basis_index(layout, bits.value(), rule);
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// |D_{S,M}>: equal weight on every 2S-bit pattern of Hamming weight S - M.
inline ComplexVector dicke_state_vector(Spin spin, int twoM) {
  spin.level_of(twoM);
  const int K = spin.twice();
  const int w = (K - twoM) / 2;
  const double amp = 1.0 / std::sqrt(binomial(K, w));
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << K);
  for (Eigen::Index r = 0; r < v.size(); ++r)
    if (std::popcount(static_cast<std::uint64_t>(r)) == w) v(r) = amp;
  return v;
}

// U_Dicke on qubits first .. first + 2S - 1 as a split-and-cyclic-shift
// cascade: SCS_K on the whole window, then SCS_{K-1} on the top K-1 qubits,
// down to SCS_2. Maps |1_w> (lowest w qubits set) to the weight-w Dicke state.
inline Circuit dicke_circuit(Spin spin, int first = 0, int width = -1) {
  const int K = spin.twice();
  Circuit c;
  c.width = width < 0 ? first + K : width;
  require(first >= 0 && first + K <= c.width, "dicke_circuit: window outside register");
  for (int n = K; n >= 2; --n) {
    const int o = first + K - n;
    for (int i = 1; i < n; ++i) {
      const double theta = 2.0 * std::acos(std::sqrt(static_cast<double>(i) / n));
      c.append(CNOT{o + i, o});
      if (i == 1) c.append(ControlledRY{o + 1, theta, {o}});
      else c.append(ControlledRY{o + i, theta, {o, o + i - 1}});
      c.append(CNOT{o + i, o});
    }
  }
  return c;
}

inline Circuit inverse_circuit(const Circuit& c) {
  Circuit inv;
  inv.width = c.width;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    std::visit(
        [](auto& gate) {
          using T = std::decay_t<decltype(gate)>;
          if constexpr (std::is_same_v<T, PauliRotation> || std::is_same_v<T, QuditRotation> ||
                        std::is_same_v<T, ControlledRY>)
            gate.angle = -gate.angle;
          else if constexpr (std::is_same_v<T, DickePrep>)
            gate.inverse = !gate.inverse;
          else if constexpr (std::is_same_v<T, BitFlip> || std::is_same_v<T, CNOT>)
            ;
          else
            throw ValidationError("inverse_circuit: level-set gates are not invertible");
        },
        g);
    inv.gates.push_back(std::move(g));
  }
  return inv;
}

}  // namespace spinenc
