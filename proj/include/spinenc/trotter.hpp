#pragma once

// First-order Suzuki-Trotter circuits: one rotation per Hamiltonian term per
// step, in term-list order.

#include <optional>
#include <string>

#include "spinenc/circuit.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/pauli.hpp"

namespace spinenc {

struct TrotterPlan {
  double dtau;
  int nSteps;

  TrotterPlan(double dt, int n) : dtau{dt}, nSteps{n} {
    require(dt > 0.0, "trotter plan: dtau must be > 0");
    require(n >= 0, "trotter plan: nSteps must be >= 0");
  }
  double final_time() const { return dtau * nSteps; }
};

struct NoiseConfig {
  double eps2q = 0.0;
  bool enabled = false;

  NoiseConfig() = default;
  explicit NoiseConfig(double eps) : eps2q{eps}, enabled{eps > 0.0} {
    require(eps >= 0.0 && eps < 1.0, "noise: eps2q must lie in [0, 1)");
  }
  double strength() const { return enabled ? eps2q : 0.0; }
};

inline Circuit prep_circuit(const EncodingLayout& layout, const LatticeBasisState& state) {
  Circuit c;
  c.width = layout.width();
  if (layout.is_qudit()) {
    for (int n = 0; n < layout.sites(); ++n) c.append(LevelSet{n, state.level(n)});
    return c;
  }
  const std::uint64_t bits = encode_state(layout, state);
  for (int q = 0; q < layout.width(); ++q)
    if ((bits >> q) & 1U) c.append(BitFlip{q});
  return c;
}

inline Circuit dressing_circuit(const EncodingLayout& layout, bool inverse) {
  require(layout.kind() == EncodingKind::Dicke, "Dicke dressing requested for a " + to_string(layout.kind()) + " layout");
  Circuit c;
  c.width = layout.width();
  for (int n = 0; n < layout.sites(); ++n) c.append(DickePrep{n, layout.first(n), layout.spin().twice(), inverse});
  return c;
}

inline Circuit trotter_step(const PauliSum& sum, double dtau) {
  Circuit c;
  c.width = sum.width();
  for (const auto& t : sum.terms()) c.append(PauliRotation{dtau * t.coeff, t.string});
  return c;
}

inline Circuit trotter_step(const GellMannSum& sum, double dtau) {
  Circuit c;
  c.width = sum.sites();
  for (const auto& t : sum.terms()) c.append(QuditRotation{dtau * t.coeff, t.string});
  return c;
}

// [prep] [U_Dicke per site] step^N [U_Dicke^dagger per site]. Dressing wraps
// the whole evolution once.
inline Circuit trotter_circuit(const PauliSum& sum, const EncodingLayout& layout, const TrotterPlan& plan,
                               bool withDickeDressing, const std::optional<LatticeBasisState>& prep = std::nullopt) {
  require(!layout.is_qudit(), "trotter_circuit: qubit Hamiltonian on a qudit layout");
  require(sum.width() == layout.width(), "trotter_circuit: Hamiltonian width does not match layout");
  if (withDickeDressing)
    require(layout.kind() == EncodingKind::Dicke,
            "Dicke dressing requested for a " + to_string(layout.kind()) + " layout");
  Circuit c;
  c.width = layout.width();
  if (prep) c.append(prep_circuit(layout, *prep));
  if (withDickeDressing) c.append(dressing_circuit(layout, false));
  const Circuit step = trotter_step(sum, plan.dtau);
  for (int s = 0; s < plan.nSteps; ++s) c.append(step);
  if (withDickeDressing) c.append(dressing_circuit(layout, true));
  return c;
}

inline Circuit qudit_trotter_circuit(const GellMannSum& sum, const EncodingLayout& layout, const TrotterPlan& plan,
                                     const std::optional<LatticeBasisState>& prep = std::nullopt) {
  require(layout.is_qudit(), "qudit_trotter_circuit: layout is not a qudit layout");
  require(sum.sites() == layout.sites() && sum.levels() == layout.spin().levels(),
          "qudit_trotter_circuit: Hamiltonian shape does not match layout");
  Circuit c;
  c.width = layout.sites();
  if (prep) c.append(prep_circuit(layout, *prep));
  const Circuit step = trotter_step(sum, plan.dtau);
  for (int s = 0; s < plan.nSteps; ++s) c.append(step);
  return c;
}

}  // namespace spinenc
