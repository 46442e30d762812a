#pragma once

// Observables, postselection, error metrics and the Trotter step-size study.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "spinenc/density.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"
#include "spinenc/fitting.hpp"
#include "spinenc/qham.hpp"
#include "spinenc/sampling.hpp"
#include "spinenc/sector.hpp"
#include "spinenc/spincore.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"

namespace spinenc {

struct PopulationSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> sigma;  // empty when no error bars

  void validate(bool probabilities = true) const {
    require(times.size() == values.size(), "population series: times and values differ in length");
    require(sigma.empty() || sigma.size() == values.size(), "population series: sigma length mismatch");
    if (probabilities)
      for (double v : values) require(v >= -1e-9 && v <= 1.0 + 1e-9, "population series: value outside [0, 1]");
  }
};

// Probability that the register reads the initial spin state. For Dicke
// layouts the register is read after U_Dicke^dagger, so only the seed counts.
inline double initial_state_population(const Eigen::VectorXd& probs, const EncodingLayout& layout,
                                       const LatticeBasisState& initial) {
  const std::uint64_t idx = encode_state(layout, initial);
  require(idx < static_cast<std::uint64_t>(probs.size()), "initial_state_population: register size mismatch");
  return probs(static_cast<Eigen::Index>(idx));
}

inline double initial_state_population(const ShotResult& shots, const EncodingLayout& layout,
                                       const LatticeBasisState& initial) {
  return shots.frequency(encode_state(layout, initial));
}

// Mean |noisy - clean| over grid points with t <= T (t = 0 included).
inline double average_error(const PopulationSeries& noisy, const PopulationSeries& clean, double T) {
  noisy.validate(false);
  clean.validate(false);
  require(noisy.times.size() == clean.times.size(), "average_error: series lengths differ");
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < noisy.times.size(); ++i) {
    require(std::abs(noisy.times[i] - clean.times[i]) <= 1e-12, "average_error: time grids differ");
    if (noisy.times[i] > T + 1e-9) continue;
    acc += std::abs(noisy.values[i] - clean.values[i]);
    ++count;
  }
  require(count > 0, "average_error: no grid points with t <= T");
  return acc / count;
}

// <Sz_a Sz_b> estimates in units of hbar^2.
struct CorrelatorEstimate {
  double raw = 0.0;                  // sum over mapped outcomes / all shots
  std::optional<double> normalized;  // within the initial M_tot sector; empty if the sector was never seen
  double pMtot = 0.0;                // weight of the initial M_tot sector
};

namespace detail {
template <class ForEach>
CorrelatorEstimate correlator_from(ForEach&& forEach, double total, const EncodingLayout& layout, int a, int b,
                                   int twoMtot) {
  require(a >= 0 && a < layout.sites() && b >= 0 && b < layout.sites(), "correlator: site out of range");
  double raw = 0.0, inSector = 0.0, sectorWeight = 0.0;
  forEach([&](std::uint64_t idx, double w) {
    const auto s = decode_basis_index(layout, idx);
    if (!s) return;
    const double mm = s->m(a) * s->m(b);
    raw += w * mm;
    if (s->twice_total() == twoMtot) {
      inSector += w * mm;
      sectorWeight += w;
    }
  });
  CorrelatorEstimate out;
  out.raw = raw / total;
  out.pMtot = sectorWeight / total;
  if (sectorWeight > 0.0) out.normalized = inSector / sectorWeight;
  return out;
}
}  // namespace detail

inline CorrelatorEstimate correlator_SzSz(const ShotResult& shots, const EncodingLayout& layout, int a, int b,
                                          int twoMtotInitial) {
  require(shots.nShots >= 1, "correlator: no shots");
  return detail::correlator_from(
      [&](auto&& f) {
        for (const auto& [idx, c] : shots.counts) f(idx, static_cast<double>(c));
      },
      static_cast<double>(shots.nShots), layout, a, b, twoMtotInitial);
}

// Same estimator on exact register probabilities.
inline CorrelatorEstimate correlator_SzSz(const Eigen::VectorXd& probs, const EncodingLayout& layout, int a, int b,
                                          int twoMtotInitial) {
  return detail::correlator_from(
      [&](auto&& f) {
        for (Eigen::Index i = 0; i < probs.size(); ++i)
          if (probs(i) > 0.0) f(static_cast<std::uint64_t>(i), probs(i));
      },
      1.0, layout, a, b, twoMtotInitial);
}

// ---------------------------------------------------------------------------
// Two-site populations p(f, i) = |<f| U |i>|^2, indexed by
// LatticeBasisState::index() of the final (row) and initial (column) state.

inline Eigen::MatrixXd exact_pair_populations(Spin spin, double t) {
  const Lattice lat = Lattice::open_chain(2, spin);
  const ExactPropagator prop(build_heisenberg(lat));
  return prop.unitary(t).cwiseAbs2();
}

// Noise-free Dicke Trotter populations after nSteps steps of t / nSteps,
// propagated sector by sector.
inline Eigen::MatrixXd trotter_pair_populations(Spin spin, int nSteps, double t = 1.0) {
  require(nSteps >= 1, "trotter_pair_populations: nSteps must be >= 1");
  const int K = spin.twice(), d = spin.levels();
  const Lattice lat = Lattice::open_chain(2, spin);
  const auto gates = exchange_gates(trotter_step(build_dicke(lat), t / nSteps));
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d * d, d * d);
  auto pair_index = [&](int w1, int w0) { return (K - w1) * d + (K - w0); };
  for (int W = 0; W <= 2 * K; ++W) {
    ExchangeSector sector(2 * K, W);
    std::vector<int> w1s;
    for (int w1 = std::max(0, W - K); w1 <= std::min(K, W); ++w1) w1s.push_back(w1);
    const auto cols = static_cast<Eigen::Index>(w1s.size());
    SectorBatch batch = SectorBatch::Zero(sector.dim(), cols);
    std::vector<int> siteWeight(sector.dim());
    for (Eigen::Index r = 0; r < sector.dim(); ++r) {
      const std::uint64_t idx = sector.states()[r];
      siteWeight[r] = std::popcount(idx >> K);
      const int w1 = siteWeight[r];
      const double amp = 1.0 / std::sqrt(binomial(K, w1) * binomial(K, W - w1));
      for (Eigen::Index c = 0; c < cols; ++c)
        if (w1s[c] == w1) batch(r, c) = amp;
    }
    for (int s = 0; s < nSteps; ++s) sector.apply(batch, gates);
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::vector<cplx> overlap(w1s.size(), 0.0);
      for (Eigen::Index r = 0; r < sector.dim(); ++r) overlap[siteWeight[r] - w1s.front()] += batch(r, c);
      for (std::size_t f = 0; f < w1s.size(); ++f) {
        const int w1 = w1s[f];
        const double norm = binomial(K, w1) * binomial(K, W - w1);
        P(pair_index(w1, W - w1), pair_index(w1s[c], W - w1s[c])) = std::norm(overlap[f]) / norm;
      }
    }
  }
  return P;
}

// The same populations from the full dressed circuit on a density matrix,
// with pair-depolarizing noise on the two-qubit gates.
inline Eigen::MatrixXd noisy_pair_populations(Spin spin, int nSteps, const NoiseConfig& noise, double t = 1.0) {
  require(nSteps >= 0, "noisy_pair_populations: nSteps must be >= 0");
  const int d = spin.levels();
  const EncodingLayout layout(EncodingKind::Dicke, spin, 2);
  check_density_qubits(layout.width());
  const PauliSum h = build_dicke(Lattice::open_chain(2, spin));
  const double dtau = nSteps > 0 ? t / nSteps : t;
  const Circuit body = trotter_circuit(h, layout, TrotterPlan(dtau, nSteps), true);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int i = 0; i < d * d; ++i) {
    const auto init = LatticeBasisState::from_index(spin, 2, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = run_density_qubit(body, Bitstring(layout.width(), encode_state(layout, init)), noise);
    for (int f = 0; f < d * d; ++f) {
      const auto fin = LatticeBasisState::from_index(spin, 2, static_cast<std::uint64_t>(f));
      const auto idx = static_cast<Eigen::Index>(encode_state(layout, fin));
      P(f, i) = rho(idx, idx).real();
    }
  }
  return P;
}

// Number of (final, initial) pairs with equal M_tot: (2S+1)[1 + 2(2S+1)^2]/3.
inline double zeta(Spin spin) {
  const double d = spin.levels();
  return d * (1.0 + 2.0 * d * d) / 3.0;
}

inline int pair_twice_total(Spin spin, int index) {
  return LatticeBasisState::from_index(spin, 2, static_cast<std::uint64_t>(index)).twice_total();
}

// Mean |p - p_exact| over sector-matched pairs (divisor zeta). With
// `mitigated`, each initial state's column is renormalized within its sector
// first.
inline double average_discrepancy(Spin spin, const Eigen::MatrixXd& P, const Eigen::MatrixXd& exact, bool mitigated) {
  const int n = spin.levels() * spin.levels();
  require(P.rows() == n && P.cols() == n && exact.rows() == n && exact.cols() == n,
          "average_discrepancy: population matrix size mismatch");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const int twoM = pair_twice_total(spin, i);
    double norm = 1.0;
    if (mitigated) {
      norm = 0.0;
      for (int f = 0; f < n; ++f)
        if (pair_twice_total(spin, f) == twoM) norm += P(f, i);
      if (norm <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    }
    for (int f = 0; f < n; ++f)
      if (pair_twice_total(spin, f) == twoM) acc += std::abs(P(f, i) / norm - exact(f, i));
  }
  return acc / zeta(spin);
}

struct DiscrepancyPoint {
  int nSteps;
  double delta;
  double deltaNorm;
};

struct DiscrepancyReport {
  int twoS = 0;
  std::vector<DiscrepancyPoint> perN;
  double B = 0.0;
  double BNorm = 0.0;
  double mixedBaseline = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double slopeNorm = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<int> default_step_grid() { return {2, 8, 32, 128, 512, 2048}; }

// Below this Delta-bar is roundoff (S = 1/2 accumulates ~1e-13 at N = 2048).
inline constexpr double kDiscrepancyFloor = 1e-12;

// Delta-bar = B / N^2 with the exponent held at -2: log B is the mean of
// log(Delta-bar N^2). Zero Delta-bar points are skipped; all-zero gives 0.
inline double fit_B(const std::vector<DiscrepancyPoint>& pts, bool normalized) {
  double acc = 0.0;
  int count = 0;
  for (const auto& p : pts) {
    const double v = normalized ? p.deltaNorm : p.delta;
    if (!(v > kDiscrepancyFloor)) continue;
    acc += std::log(v * p.nSteps * static_cast<double>(p.nSteps));
    ++count;
  }
  return count ? std::exp(acc / count) : 0.0;
}

inline double fit_slope(const std::vector<DiscrepancyPoint>& pts, bool normalized) {
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    const double v = normalized ? p.deltaNorm : p.delta;
    if (v > kDiscrepancyFloor) {
      xs.push_back(p.nSteps);
      ys.push_back(v);
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return fit_power_law(xs, ys).b;
}

// Completely mixed register: every p(f, i) = 2^{-2 K_q}.
inline double mixed_baseline(const EncodingLayout& layout, double t = 1.0) {
  require(layout.kind() == EncodingKind::Dicke && layout.sites() == 2, "mixed_baseline: needs a two-site Dicke layout");
  const Spin spin = layout.spin();
  const int n = spin.levels() * spin.levels();
  const Eigen::MatrixXd mixed = Eigen::MatrixXd::Constant(n, n, std::ldexp(1.0, -layout.width()));
  return average_discrepancy(spin, mixed, exact_pair_populations(spin, t), false);
}

// Two-site Dicke study at final time t (default 1) with dtau = t / N.
// Noise-free runs use the sector propagator; noisy runs the density path.
inline DiscrepancyReport trotter_discrepancy(Spin spin, const std::vector<int>& nSteps,
                                             const NoiseConfig& noise = NoiseConfig{}, double t = 1.0) {
  require(!nSteps.empty(), "trotter_discrepancy: empty step list");
  DiscrepancyReport rep;
  rep.twoS = spin.twice();
  const Eigen::MatrixXd exact = exact_pair_populations(spin, t);
  for (int n : nSteps) {
    require(n >= 1, "trotter_discrepancy: step counts must be >= 1");
    const Eigen::MatrixXd P = noise.strength() > 0.0 ? noisy_pair_populations(spin, n, noise, t)
                                                     : trotter_pair_populations(spin, n, t);
    rep.perN.push_back({n, average_discrepancy(spin, P, exact, false), average_discrepancy(spin, P, exact, true)});
  }
  rep.B = fit_B(rep.perN, false);
  rep.BNorm = fit_B(rep.perN, true);
  rep.slope = fit_slope(rep.perN, false);
  rep.slopeNorm = fit_slope(rep.perN, true);
  rep.mixedBaseline = mixed_baseline(EncodingLayout(EncodingKind::Dicke, spin, 2), t);
  return rep;
}

// dtau = sqrt(target / (T B)); T = 1 gives sqrt(target / B).
inline double required_dtau(double B, double targetDelta, double T = 1.0) {
  require(B > 0.0, "required_dtau: B must be > 0");
  require(targetDelta > 0.0 && T > 0.0, "required_dtau: target and T must be > 0");
  return std::sqrt(targetDelta / (T * B));
}

// C in dtau = C / S, least squares over the given (S, B) points.
inline double step_size_constant(const std::vector<std::pair<double, double>>& sAndB, double targetDelta = 0.01) {
  std::vector<double> xs, ys;
  for (const auto& [s, b] : sAndB) {
    xs.push_back(s);
    ys.push_back(required_dtau(b, targetDelta));
  }
  return fit_inverse(xs, ys);
}

}  // namespace spinenc
