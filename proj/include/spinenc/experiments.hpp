#pragma once

// End-to-end runs behind the CLI: term tables, two-site population series,
// the four-site correlator and the Trotter step-size sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinenc/analysis.hpp"
#include "spinenc/density.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/io.hpp"
#include "spinenc/qham.hpp"
#include "spinenc/sampling.hpp"
#include "spinenc/spincore.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"

namespace spinenc {

struct ExperimentSpec {
  std::string experiment = "terms";
  EncodingKind mapping = EncodingKind::Dicke;
  int twoS = 2;
  int nSites = 2;
  std::vector<Edge> edges;  // empty: open chain
  double dtau = 0.2;
  int nSteps = 31;
  std::uint64_t nShots = 1024;
  std::uint64_t seed = 1;
  double noise = 0.0;
  int smax = 10;  // largest 2S for term tables
  std::string out = ".";

  Lattice lattice() const {
    return edges.empty() ? Lattice::open_chain(nSites, Spin{twoS}) : Lattice{nSites, edges, Spin{twoS}};
  }

  void validate() const {
    Spin{twoS};
    require(nSites >= 1, "spec: sites must be >= 1");
    require(dtau > 0.0, "spec: dtau must be > 0");
    require(nSteps >= 0, "spec: steps must be >= 0");
    require(nShots >= 1, "spec: shots must be >= 1");
    require(noise >= 0.0 && noise < 1.0, "spec: noise must lie in [0, 1)");
    require(smax >= 1 && smax <= 63, "spec: smax (as 2S) must lie in [1, 63]");
    lattice();
  }

  // Provenance lines for output headers.
  std::vector<std::string> header() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["mapping"] = to_string(mapping);
    j["twoS"] = twoS;
    j["nSites"] = nSites;
    j["edges"] = lattice().edges();
    j["dtau"] = dtau;
    j["nSteps"] = nSteps;
    j["nShots"] = nShots;
    j["seed"] = seed;
    j["noise"] = noise;
    j["smax"] = smax;
    return {"spinenc " + experiment, "spec " + j.dump(), "seed " + std::to_string(seed)};
  }
};

// ---------------------------------------------------------------------------
// Term counts

inline CsvTable terms_table(int smaxTwice) {
  CsvTable t{{"twoS", "S", "mapping", "L", "LMultiq", "histogram"}, {}};
  for (int twoS = 1; twoS <= smaxTwice; ++twoS) {
    const Spin spin{twoS};
    const Lattice lat = Lattice::open_chain(2, spin);
    auto add = [&](const std::string& name, const HamiltonianStats& s) {
      t.add_row({std::to_string(twoS), fmt_num(spin.value()), name, std::to_string(s.L), std::to_string(s.LMultiq),
                 format_histogram(s)});
    };
    add("compact", term_stats(build_compact(lat)));
    if (2 * spin.levels() <= kMaxEncodedQubits) add("direct", term_stats(build_direct(lat)));
    add("dicke", term_stats(build_dicke(lat)));
    if (spin.levels() <= 11) add("qudit", term_stats(build_qudit(lat)));
  }
  return t;
}

inline CsvTable scaling_table(const CompactScalingStudy& study) {
  CsvTable t{{"twoS", "S", "Kq", "L_compact"}, {}};
  for (const auto& [twoS, L] : study.perS)
    t.add_row({std::to_string(twoS), fmt_num(0.5 * twoS), std::to_string(qubits_per_site(EncodingKind::Compact, Spin{twoS})),
               std::to_string(L)});
  return t;
}

inline nlohmann::json scaling_fits_json(const CompactScalingStudy& study) {
  nlohmann::json j;
  j["a1"] = study.fitPower.a;
  j["b1"] = study.fitPower.b;
  j["a2"] = study.fitAveraged.a;
  j["b2"] = study.fitAveraged.b;
  nlohmann::json avg = nlohmann::json::array();
  for (const auto& [sc, L] : study.averaged) avg.push_back({{"Sc", sc}, {"Lbar", L}});
  j["averaged"] = avg;
  return j;
}

// ---------------------------------------------------------------------------
// Two-site population series p0(t)

struct EvolveResult {
  CsvTable table;
  PopulationSeries exact, clean, noisy, shots;
  std::optional<double> epsBar;      // noisy vs clean, exact probabilities, t <= 3.2
  std::optional<double> epsBarShots; // same from the shot estimates
};

inline EvolveResult run_evolve(const ExperimentSpec& spec) {
  spec.validate();
  const Spin spin{spec.twoS};
  const Lattice lat = spec.lattice();
  const EncodingLayout layout(spec.mapping, spin, lat.sites());
  std::vector<int> init(lat.sites(), -spin.twice());
  init[0] = spin.twice();
  const LatticeBasisState initial{spin, init};
  const NoiseConfig noise(spec.noise);

  const ExactPropagator exactProp(build_heisenberg(lat));
  const ComplexVector psi0 = basis_vector(lat.hilbert_dim(), initial.index());

  EvolveResult res;
  res.table.columns = {"n", "t", "p_exact", "p_trotter", "p_noisy", "p_shots", "sigma"};
  const std::uint64_t i0 = encode_state(layout, initial);
  const TrotterPlan plan(spec.dtau, spec.nSteps);

  // Each branch keeps the state after n steps and measures a copy.
  std::vector<Eigen::VectorXd> cleanProbs, noisyProbs;
  if (layout.is_qudit()) {
    const GellMannSum h = build_qudit(lat);
    const Circuit step = trotter_step(h, plan.dtau);
    const Register reg{spin.levels(), lat.sites()};
    check_qudit_density_dim(reg.dim());
    QuditExecutor ex(reg.radix, reg.units);
    const auto dim = static_cast<Eigen::Index>(reg.dim());
    DensityMatrix clean = DensityMatrix::Zero(dim, dim), dirty = clean;
    clean(static_cast<Eigen::Index>(i0), static_cast<Eigen::Index>(i0)) = 1.0;
    dirty = clean;
    for (int n = 0; n <= spec.nSteps; ++n) {
      if (n > 0) {
        apply_density_qudit(clean, ex, step, NoiseConfig{});
        if (noise.enabled) apply_density_qudit(dirty, ex, step, noise);
      }
      cleanProbs.push_back(diagonal_probabilities(clean));
      if (noise.enabled) noisyProbs.push_back(diagonal_probabilities(dirty));
    }
  } else {
    const PauliSum h = spec.mapping == EncodingKind::Compact ? build_compact(lat)
                       : spec.mapping == EncodingKind::Direct ? build_direct(lat)
                                                              : build_dicke(lat);
    const bool dressed = spec.mapping == EncodingKind::Dicke;
    check_statevector_width(layout.width());
    Circuit prefix = prep_circuit(layout, initial);
    if (dressed) prefix.append(dressing_circuit(layout, false));
    Circuit suffix;
    suffix.width = layout.width();
    if (dressed) suffix = dressing_circuit(layout, true);
    const Circuit step = trotter_step(h, plan.dtau);
    const std::uint64_t dim = std::uint64_t{1} << layout.width();
    ComplexVector psi = basis_vector(dim, 0);
    apply_circuit(psi, prefix);
    std::optional<DensityMatrix> rho;
    if (noise.enabled) {
      check_density_qubits(layout.width());
      rho = DensityMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      (*rho)(0, 0) = 1.0;
      apply_density_qubit(*rho, prefix, noise);
    }
    for (int n = 0; n <= spec.nSteps; ++n) {
      if (n > 0) {
        apply_circuit(psi, step);
        if (rho) apply_density_qubit(*rho, step, noise);
      }
      ComplexVector out = psi;
      apply_circuit(out, suffix);
      cleanProbs.push_back(probabilities(out));
      if (rho) {
        DensityMatrix r = *rho;
        apply_density_qubit(r, suffix, noise);
        noisyProbs.push_back(diagonal_probabilities(r));
      }
    }
  }

  for (int n = 0; n <= spec.nSteps; ++n) {
    const double t = n * spec.dtau;
    const double pe = std::norm(exactProp.propagate(psi0, t)(static_cast<Eigen::Index>(initial.index())));
    const double pc = initial_state_population(cleanProbs[n], layout, initial);
    const Eigen::VectorXd& sampled = noise.enabled ? noisyProbs[n] : cleanProbs[n];
    const double pn = noise.enabled ? initial_state_population(noisyProbs[n], layout, initial) : std::nan("");
    const ShotResult shots = sample_shots(sampled, spec.nShots, spec.seed + static_cast<std::uint64_t>(n), layout.is_qudit() ? 0 : layout.width());
    const double ps = initial_state_population(shots, layout, initial);
    const double sigma = bootstrap_std(
        shots, [&](const ShotResult& r) { return initial_state_population(r, layout, initial); }, 1000,
        spec.seed ^ (0xB007ULL + static_cast<std::uint64_t>(n)));
    res.exact.times.push_back(t), res.exact.values.push_back(pe);
    res.clean.times.push_back(t), res.clean.values.push_back(pc);
    res.noisy.times.push_back(t), res.noisy.values.push_back(noise.enabled ? pn : pc);
    res.shots.times.push_back(t), res.shots.values.push_back(ps), res.shots.sigma.push_back(sigma);
    res.table.add_row({std::to_string(n), fmt_num(t), fmt_num(pe), fmt_num(pc), fmt_num(pn), fmt_num(ps), fmt_num(sigma)});
  }
  if (noise.enabled && spec.nSteps * spec.dtau >= 3.2 - 1e-9) {
    res.epsBar = average_error(res.noisy, res.clean, 3.2);
    res.epsBarShots = average_error(res.shots, res.clean, 3.2);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Four-site chain correlator <Sz_0 Sz_3> / S^2 from |-S,-S,-S,S>

struct Chain4Row {
  int n;
  double t;
  double exact;
  double pt2;
  CorrelatorEstimate amplitudes;  // from exact register probabilities
  CorrelatorEstimate shots;
};

struct Chain4Result {
  CsvTable table;
  std::vector<Chain4Row> rows;
};

inline LatticeBasisState chain4_initial(Spin spin) {
  const int s = spin.twice();
  return LatticeBasisState{spin, {s, -s, -s, -s}};
}

inline Chain4Result run_chain4(const ExperimentSpec& spec) {
  spec.validate();
  const Spin spin{spec.twoS};
  require(spec.nSites == 4, "chain4: needs four sites");
  require(spec.mapping == EncodingKind::Dicke, "chain4: runs with the Dicke mapping");
  const Lattice lat = spec.lattice();
  const EncodingLayout layout(EncodingKind::Dicke, spin, 4);
  check_statevector_width(layout.width());
  const LatticeBasisState initial = chain4_initial(spin);
  const double s2 = spin.value() * spin.value();
  const int a = 0, b = 3;

  const ExactPropagator exactProp(build_heisenberg(lat));
  const ComplexVector psi0 = basis_vector(lat.hilbert_dim(), initial.index());

  const PauliSum h = build_dicke(lat);
  Circuit prefix = prep_circuit(layout, initial);
  prefix.append(dressing_circuit(layout, false));
  const Circuit suffix = dressing_circuit(layout, true);
  const Circuit step = trotter_step(h, spec.dtau);
  ComplexVector psi = basis_vector(std::uint64_t{1} << layout.width(), 0);
  apply_circuit(psi, prefix);

  const NoiseConfig noise(spec.noise);
  std::optional<DensityMatrix> rho;
  if (noise.enabled) {
    check_density_qubits(layout.width());
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << layout.width());
    rho = DensityMatrix::Zero(dim, dim);
    (*rho)(0, 0) = 1.0;
    apply_density_qubit(*rho, prefix, noise);
  }

  Chain4Result res;
  res.table.columns = {"n", "t", "exact", "pt2", "raw_amp", "norm_amp", "pMtot_amp", "raw_shots", "norm_shots", "pMtot_shots"};
  const int twoMtot = initial.twice_total();
  for (int n = 0; n <= spec.nSteps; ++n) {
    if (n > 0) {
      apply_circuit(psi, step);
      if (rho) apply_density_qubit(*rho, step, noise);
    }
    const double t = n * spec.dtau;
    Chain4Row row{n, t, szsz_expectation(lat, exactProp.propagate(psi0, t), a, b) / s2, pt2_correlator(spin, t), {}, {}};
    ComplexVector out = psi;
    apply_circuit(out, suffix);
    Eigen::VectorXd probs = probabilities(out);
    if (rho) {
      DensityMatrix r = *rho;
      apply_density_qubit(r, suffix, noise);
      probs = diagonal_probabilities(r);
    }
    row.amplitudes = correlator_SzSz(probs, layout, a, b, twoMtot);
    row.shots = correlator_SzSz(sample_shots(probs, spec.nShots, spec.seed + static_cast<std::uint64_t>(n), layout.width()),
                                layout, a, b, twoMtot);
    auto norm = [&](const std::optional<double>& v) { return v ? fmt_num(*v / s2) : std::string("undefined"); };
    res.table.add_row({std::to_string(n), fmt_num(t), fmt_num(row.exact), fmt_num(row.pt2), fmt_num(row.amplitudes.raw / s2),
                       norm(row.amplitudes.normalized), fmt_num(row.amplitudes.pMtot), fmt_num(row.shots.raw / s2),
                       norm(row.shots.normalized), fmt_num(row.shots.pMtot)});
    res.rows.push_back(row);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Trotter step-size sweep

struct ScalingResult {
  CsvTable table;
  std::vector<DiscrepancyReport> reports;
  nlohmann::json fits;
};

inline ScalingResult run_scaling(const std::vector<int>& twoSValues, const std::vector<int>& grid, const NoiseConfig& noise) {
  ScalingResult res;
  res.table.columns = {"twoS", "S", "N", "dtau", "delta", "delta_norm", "delta_mix"};
  std::vector<std::pair<double, double>> rawB, normB;
  nlohmann::json perS = nlohmann::json::array();
  for (int twoS : twoSValues) {
    const Spin spin{twoS};
    DiscrepancyReport rep = trotter_discrepancy(spin, grid, noise);
    for (const auto& p : rep.perN)
      res.table.add_row({std::to_string(twoS), fmt_num(spin.value()), std::to_string(p.nSteps), fmt_num(1.0 / p.nSteps),
                         fmt_num(p.delta), fmt_num(p.deltaNorm), fmt_num(rep.mixedBaseline)});
    perS.push_back({{"twoS", twoS}, {"B", rep.B}, {"BNorm", rep.BNorm}, {"slope", rep.slope}, {"slopeNorm", rep.slopeNorm},
                    {"mixedBaseline", rep.mixedBaseline}});
    if (twoS >= 4 && rep.B > 0.0) {
      rawB.emplace_back(spin.value(), rep.B);
      normB.emplace_back(spin.value(), rep.BNorm);
    }
    res.reports.push_back(std::move(rep));
  }
  res.fits["perS"] = perS;
  if (!rawB.empty()) {
    res.fits["C"] = step_size_constant(rawB);
    res.fits["CNorm"] = step_size_constant(normB);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Plots for the CSV files written above, picked by column schema.

inline std::pair<PlotSpec, std::vector<PlotSeries>> plot_for(const CsvTable& t) {
  auto has = [&](const std::string& c) { return std::find(t.columns.begin(), t.columns.end(), c) != t.columns.end(); };
  auto grouped = [&](const std::string& key, const std::string& x, const std::string& y, const std::string& prefix) {
    std::vector<PlotSeries> out;
    const std::size_t k = t.column(key), cx = t.column(x), cy = t.column(y);
    for (const auto& r : t.rows) {
      auto it = std::find_if(out.begin(), out.end(), [&](const PlotSeries& s) { return s.name == prefix + r[k]; });
      if (it == out.end()) it = out.insert(out.end(), PlotSeries{prefix + r[k], {}, {}});
      it->xs.push_back(std::stod(r[cx]));
      it->ys.push_back(r[cy] == "nan" || r[cy] == "undefined" ? std::nan("") : std::stod(r[cy]));
    }
    return out;
  };
  auto columns = [&](const std::string& x, const std::vector<std::string>& ys) {
    std::vector<PlotSeries> out;
    const std::size_t cx = t.column(x);
    for (const auto& y : ys) {
      if (!has(y)) continue;
      const std::size_t cy = t.column(y);
      PlotSeries s{y, {}, {}};
      for (const auto& r : t.rows) {
        s.xs.push_back(std::stod(r[cx]));
        s.ys.push_back(r[cy] == "nan" || r[cy] == "undefined" ? std::nan("") : std::stod(r[cy]));
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  if (has("mapping") && has("L")) return {{"Two-site term count", "S", "L", true, true}, grouped("mapping", "S", "L", "")};
  if (has("L_compact")) return {{"Compact term count", "S", "L", true, true}, columns("S", {"L_compact"})};
  if (has("delta")) return {{"Average discrepancy", "N", "delta", true, true}, grouped("twoS", "N", "delta", "2S=")};
  if (has("p_exact"))
    return {{"Initial-state population", "t", "p0", false, false}, columns("t", {"p_exact", "p_trotter", "p_noisy", "p_shots"})};
  if (has("raw_amp"))
    return {{"<Sz_0 Sz_3> / S^2", "t", "correlator", false, false},
            columns("t", {"exact", "raw_amp", "norm_amp", "raw_shots", "norm_shots", "pMtot_amp"})};
  // Fallback: first column against the rest.
  return {{"", t.columns.front(), "", false, false},
          columns(t.columns.front(), std::vector<std::string>(t.columns.begin() + 1, t.columns.end()))};
}

}  // namespace spinenc
