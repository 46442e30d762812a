#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

#include "spinenc/analysis.hpp"
#include "spinenc/density.hpp"
#include "spinenc/sampling.hpp"
#include "spinenc/sector.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"

using namespace spinenc;

namespace {
ComplexVector random_state(int width, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector v(Eigen::Index{1} << width);
  for (auto& x : v) x = cplx{g(rng), g(rng)};
  return v / v.norm();
}

ComplexMatrix expi(double angle, const ComplexMatrix& p) { return (cplx{0.0, -angle} * p).exp(); }
}  // namespace

TEST(Statevector, PauliRotationMatchesMatrixExponential) {
  for (const char* s : {"Z", "XY", "ZIZ", "YXZ", "IYIX"}) {
    const auto p = PauliString::parse(s);
    Circuit c;
    c.width = p.width();
    c.append(PauliRotation{0.37, p});
    const ComplexVector psi = random_state(p.width(), 5);
    const ComplexVector ref = expi(0.37, pauli_matrix(p)) * psi;
    EXPECT_LT((run_statevector(c, psi) - ref).norm(), 1e-12) << s;
  }
}

TEST(Statevector, FusedExchangeMatchesSeparateRotations) {
  Circuit fused;
  fused.width = 4;
  for (const char* s : {"ZIIZ", "YIIY", "XIIX"}) fused.append(PauliRotation{0.21, PauliString::parse(s)});
  ASSERT_TRUE(is_exchange_triple(fused.gates, 0));
  const ComplexVector psi = random_state(4, 9);
  ComplexVector ref = psi;
  for (const auto& g : fused.gates) ref = expi(0.21, pauli_matrix(std::get<PauliRotation>(g).string)) * ref;
  EXPECT_LT((run_statevector(fused, psi) - ref).norm(), 1e-12);
}

TEST(Statevector, NormPreservedOverManyGates) {
  Circuit c;
  c.width = 6;
  std::mt19937 rng(3);
  const char ops[] = "IXYZ";
  for (int i = 0; i < 10000; ++i) {
    std::string s(6, 'I');
    for (auto& ch : s) ch = ops[rng() % 4];
    c.append(PauliRotation{0.01 * (rng() % 100), PauliString::parse(s)});
  }
  EXPECT_NEAR(run_statevector(c, Bitstring(6, 5)).norm(), 1.0, 1e-9);
}

TEST(Statevector, CapAndEmptyCircuit) {
  Circuit c;
  c.width = 3;
  const ComplexVector psi = run_statevector(c, Bitstring(3, 6));
  EXPECT_EQ(psi(6), cplx(1.0));
  EXPECT_THROW(check_statevector_width(22), ResourceError);
}

TEST(Trotter, DickeStepStructure) {
  const Spin s{2};
  const EncodingLayout layout(EncodingKind::Dicke, s, 2);
  const PauliSum h = build_dicke(Lattice::open_chain(2, s));
  const Circuit c = trotter_circuit(h, layout, TrotterPlan(0.2, 1), true);
  int rot = 0, prep = 0, inv = 0;
  for (const auto& g : c.gates) {
    if (const auto* r = std::get_if<PauliRotation>(&g)) {
      ++rot;
      EXPECT_DOUBLE_EQ(r->angle, 0.05);
      EXPECT_EQ(r->string.weight(), 2);
    } else if (const auto* d = std::get_if<DickePrep>(&g)) {
      (d->inverse ? inv : prep) += 1;
    }
  }
  EXPECT_EQ(rot, 12);
  EXPECT_EQ(prep, 2);
  EXPECT_EQ(inv, 2);
  EXPECT_THROW(trotter_circuit(build_compact(Lattice::open_chain(2, s)), EncodingLayout(EncodingKind::Compact, s, 2),
                               TrotterPlan(0.2, 1), true),
               ValidationError);
  EXPECT_THROW(TrotterPlan(0.0, 1), ValidationError);
  EXPECT_THROW(NoiseConfig(1.0), ValidationError);
}

TEST(Trotter, CompactStepAngles) {
  const Lattice lat = Lattice::open_chain(2, Spin{2});
  const PauliSum h = build_compact(lat);
  const Circuit step = trotter_step(h, 0.3);
  ASSERT_EQ(step.gates.size(), 36u);
  for (std::size_t i = 0; i < h.size(); ++i)
    EXPECT_DOUBLE_EQ(std::get<PauliRotation>(step.gates[i]).angle, 0.3 * h.terms()[i].coeff);
}

TEST(Trotter, ZeroStepsReturnInitialState) {
  for (auto kind : {EncodingKind::Compact, EncodingKind::Direct, EncodingKind::Dicke}) {
    const Spin s{3};
    const Lattice lat = Lattice::open_chain(2, s);
    const EncodingLayout layout(kind, s, 2);
    const LatticeBasisState init{s, {1, -3}};
    const PauliSum h = kind == EncodingKind::Compact ? build_compact(lat) : kind == EncodingKind::Direct ? build_direct(lat) : build_dicke(lat);
    const Circuit c = trotter_circuit(h, layout, TrotterPlan(0.2, 0), kind == EncodingKind::Dicke, init);
    const auto p = probabilities(run_statevector(c, Bitstring(layout.width(), 0)));
    EXPECT_NEAR(p(static_cast<Eigen::Index>(encode_state(layout, init))), 1.0, 1e-12);
  }
}

// All terms of the S = 1/2 Heisenberg pair commute, so one step is exact.
TEST(Trotter, SpinHalfIsExact) {
  const Spin s{1};
  const Lattice lat = Lattice::open_chain(2, s);
  const EncodingLayout layout(EncodingKind::Dicke, s, 2);
  const ExactPropagator prop(build_heisenberg(lat));
  for (double dt : {0.1, 0.7, 2.3}) {
    const ComplexMatrix u = circuit_unitary(trotter_circuit(build_dicke(lat), layout, TrotterPlan(dt, 1), true));
    const ComplexMatrix ex = prop.unitary(dt);
    // Dicke S = 1/2 register equals the spin basis with |0> = up = level 1.
    for (int i = 0; i < 4; ++i)
      for (int f = 0; f < 4; ++f) {
        const auto si = LatticeBasisState::from_index(s, 2, i), sf = LatticeBasisState::from_index(s, 2, f);
        EXPECT_NEAR(std::norm(u(encode_state(layout, sf), encode_state(layout, si))), std::norm(ex(f, i)), 1e-10);
      }
  }
}

TEST(Sector, MatchesStatevector) {
  const Spin s{3};
  const EncodingLayout layout(EncodingKind::Dicke, s, 2);
  const Circuit step = trotter_step(build_dicke(Lattice::open_chain(2, s)), 0.3);
  const auto gates = exchange_gates(step);
  ExchangeSector sector(6, 3);
  SectorBatch batch = SectorBatch::Zero(sector.dim(), 1);
  batch(sector.position(0b000111), 0) = 1.0;
  ComplexVector psi = basis_vector(64, 0b000111);
  for (int n = 0; n < 5; ++n) {
    sector.apply(batch, gates);
    apply_circuit(psi, step);
  }
  // equal up to a global phase
  const cplx ph = psi(0b000111) / batch(sector.position(0b000111), 0);
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-12);
  for (Eigen::Index r = 0; r < sector.dim(); ++r) EXPECT_LT(std::abs(psi(sector.states()[r]) - ph * batch(r, 0)), 1e-12);
}

TEST(Sector, PairPopulationsMatchDensityPath) {
  const Spin s{2};
  const Eigen::MatrixXd a = trotter_pair_populations(s, 3);
  const Eigen::MatrixXd b = noisy_pair_populations(s, 3, NoiseConfig{});
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(QuditDensity, NoiselessMatchesStatevector) {
  const Spin s{3};
  const Lattice lat = Lattice::open_chain(2, s);
  const EncodingLayout layout(EncodingKind::Qudit, s, 2);
  const LatticeBasisState init{s, {3, -3}};
  const Circuit c = qudit_trotter_circuit(build_qudit(lat), layout, TrotterPlan(0.05, 16), init);
  const Circuit body = qudit_trotter_circuit(build_qudit(lat), layout, TrotterPlan(0.05, 16));
  const DensityMatrix rho = run_density_qudit(c, LatticeBasisState{s, {-3, -3}}, NoiseConfig{});
  const ComplexVector psi = run_statevector_qudit(body, init);
  EXPECT_LT((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  // the Gell-Mann step approximates exact evolution
  const ComplexVector ex = ExactPropagator(build_heisenberg(lat)).propagate(basis_vector(16, init.index()), 0.8);
  EXPECT_GT(std::norm(ex.dot(psi)), 0.99);
}

TEST(QuditDensity, FullDepolarizationIsFixedPoint) {
  const Spin s{2};
  const EncodingLayout layout(EncodingKind::Qudit, s, 2);
  Circuit c = qudit_trotter_circuit(build_qudit(Lattice::open_chain(2, s)), layout, TrotterPlan(0.2, 1));
  c.gates.resize(1);
  const DensityMatrix rho = run_density_qudit(c, LatticeBasisState{s, {2, -2}}, NoiseConfig(0.999999999));
  EXPECT_LT((rho - ComplexMatrix::Identity(9, 9) / 9.0).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(QuditDensity, TraceAndHermiticity) {
  const Spin s{3};
  const EncodingLayout layout(EncodingKind::Qudit, s, 2);
  const LatticeBasisState init{s, {3, -3}};
  const Circuit c = qudit_trotter_circuit(build_qudit(Lattice::open_chain(2, s)), layout, TrotterPlan(0.2, 10));
  const DensityMatrix rho = run_density_qudit(c, init, NoiseConfig(0.01));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
  EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(check_qudit_density_dim(5000), ResourceError);
}

TEST(QubitDensity, NoiseEventCounts) {
  EXPECT_EQ(noise_events(PauliRotation{0.1, PauliString::parse("XIZY")}).size(), 3u);
  EXPECT_EQ(noise_events(PauliRotation{0.1, PauliString::parse("ZZ")}).size(), 1u);
  EXPECT_EQ(noise_events(PauliRotation{0.1, PauliString::parse("IZ")}).size(), 0u);
  EXPECT_EQ(noise_events(CNOT{0, 1}).size(), 1u);
  EXPECT_EQ(noise_events(ControlledRY{2, 0.3, {0}}).size(), 2u);
  EXPECT_EQ(noise_events(ControlledRY{2, 0.3, {0, 1}}).size(), 4u);
}

TEST(QubitDensity, NoiselessMatchesStatevector) {
  const Spin s{2};
  const EncodingLayout layout(EncodingKind::Dicke, s, 2);
  const Circuit c = trotter_circuit(build_dicke(Lattice::open_chain(2, s)), layout, TrotterPlan(0.2, 3), true,
                                    LatticeBasisState{s, {2, -2}});
  const DensityMatrix rho = run_density_qubit(c, Bitstring(4, 0), NoiseConfig{});
  const ComplexVector psi = run_statevector(c, Bitstring(4, 0));
  EXPECT_LT((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  const DensityMatrix noisy = run_density_qubit(c, Bitstring(4, 0), NoiseConfig(0.05));
  EXPECT_NEAR(noisy.trace().real(), 1.0, 1e-10);
  EXPECT_THROW(check_density_qubits(13), ResourceError);
}

TEST(Sampling, SeededAndDeterministic) {
  Eigen::VectorXd p(4);
  p << 0.1, 0.0, 0.6, 0.3;
  const auto a = sample_shots(p, 1024, 42, 2), b = sample_shots(p, 1024, 42, 2);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.count(1), 0u);
  std::uint64_t total = 0;
  for (const auto& [k, c] : a.counts) total += c;
  EXPECT_EQ(total, 1024u);
  EXPECT_NEAR(a.frequency(2), 0.6, 0.05);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_NE(sample_shots(p, 1024, 43).counts, a.counts);
  Eigen::VectorXd bad(2);
  bad << 0.5, 0.4;
  EXPECT_THROW(sample_shots(bad, 10, 1), ValidationError);
}

TEST(Sampling, SplitMixReferenceOutput) {
  // Published SplitMix64 output for seed 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
}

TEST(Bootstrap, BinomialWidth) {
  ShotResult r;
  r.nShots = 1024;
  r.counts = {{0, 512}, {1, 512}};
  const double sd = bootstrap_std(r, [](const ShotResult& x) { return x.frequency(0); });
  EXPECT_NEAR(sd, std::sqrt(0.25 / 1024), 0.2 * std::sqrt(0.25 / 1024));
  ShotResult det;
  det.nShots = 1024;
  det.counts = {{3, 1024}};
  EXPECT_DOUBLE_EQ(bootstrap_std(det, [](const ShotResult& x) { return x.frequency(3); }), 0.0);
}
