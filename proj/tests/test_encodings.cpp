#include <gtest/gtest.h>

#include <cmath>

#include "spinenc/encodings.hpp"
#include "spinenc/statevector.hpp"

using namespace spinenc;

namespace {
ComplexMatrix ry(double a) {
  ComplexMatrix m(2, 2);
  m << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  return m;
}
}  // namespace

TEST(Layout, QubitsPerSite) {
  const int compact[] = {1, 2, 2, 3, 3, 3, 3, 4};
  for (int twoS = 1; twoS <= 8; ++twoS) {
    const Spin s{twoS};
    EXPECT_EQ(qubits_per_site(EncodingKind::Compact, s), compact[twoS - 1]);
    EXPECT_EQ(qubits_per_site(EncodingKind::Direct, s), twoS + 1);
    EXPECT_EQ(qubits_per_site(EncodingKind::Dicke, s), twoS);
    EXPECT_EQ(qubits_per_site(EncodingKind::Qudit, s), 1);
  }
  const EncodingLayout l(EncodingKind::Dicke, Spin{5}, 4);
  EXPECT_EQ(l.width(), 20);
  EXPECT_EQ(l.first(2), 10);
  EXPECT_EQ(l.site_mask(1), 0x3E0u);
  EXPECT_EQ(EncodingLayout(EncodingKind::Qudit, Spin{3}, 2).register_dim(), 16u);
  EXPECT_THROW(parse_encoding("gray"), ValidationError);
}

TEST(Encode, SitePatterns) {
  const Spin s{2};
  const EncodingLayout c(EncodingKind::Compact, s, 1), d(EncodingKind::Direct, s, 1), k(EncodingKind::Dicke, s, 1);
  // M = -1, 0, 1
  EXPECT_EQ(encode_site(c, -2), 0u);
  EXPECT_EQ(encode_site(c, 2), 2u);
  EXPECT_EQ(encode_site(d, 0), 2u);
  EXPECT_EQ(encode_site(k, 2), 0u);
  EXPECT_EQ(encode_site(k, 0), 1u);
  EXPECT_EQ(encode_site(k, -2), 3u);
}

TEST(Encode, RoundTripAllMappings) {
  for (auto kind : {EncodingKind::Compact, EncodingKind::Direct, EncodingKind::Dicke, EncodingKind::Qudit})
    for (int twoS = 1; twoS <= 4; ++twoS) {
      const Spin s{twoS};
      const EncodingLayout layout(kind, s, 2);
      for (std::uint64_t i = 0; i < Lattice::open_chain(2, s).hilbert_dim(); ++i) {
        const auto st = LatticeBasisState::from_index(s, 2, i);
        const auto back = decode_basis_index(layout, encode_state(layout, st));
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, st);
      }
    }
}

TEST(Decode, UnusedPatterns) {
  const EncodingLayout c(EncodingKind::Compact, Spin{2}, 1);
  EXPECT_FALSE(decode_site(c, 3).has_value());
  const EncodingLayout d(EncodingKind::Direct, Spin{2}, 1);
  EXPECT_FALSE(decode_site(d, 0).has_value());
  EXPECT_FALSE(decode_site(d, 5).has_value());
  const EncodingLayout k(EncodingKind::Dicke, Spin{2}, 1);
  EXPECT_FALSE(decode_site(k, 2).has_value());
  EXPECT_EQ(decode_site(k, 2, DickeDecode::Weight), 0);
  EXPECT_EQ(*decode_bitstring(EncodingLayout(EncodingKind::Dicke, Spin{2}, 2), Bitstring::parse("1100")),
            LatticeBasisState(Spin{2}, {2, -2}));
}

TEST(Bitstring, Text) {
  EXPECT_EQ(Bitstring::parse("0110").value(), 6u);
  EXPECT_EQ(Bitstring(5, 3).to_string(), "00011");
  EXPECT_THROW(Bitstring::parse("012"), ValidationError);
}

TEST(Dicke, DefiningRelationAllM) {
  for (int twoS = 1; twoS <= 7; ++twoS) {
    const Spin s{twoS};
    const ComplexMatrix u = circuit_unitary(dicke_circuit(s));
    EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm(), 1e-10);
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      const int w = (twoS - twoM) / 2;
      const ComplexVector out = u.col(static_cast<Eigen::Index>((std::uint64_t{1} << w) - 1));
      EXPECT_LT((out - dicke_state_vector(s, twoM)).cwiseAbs().maxCoeff(), 1e-10) << "2S=" << twoS << " 2M=" << twoM;
    }
  }
}

// Total spin of 2S spin-1/2 qubits: S^2 = (3K/4) I + (1/2) sum_{i<j} SWAP-like terms.
TEST(Dicke, TotalSpinEigenstate) {
  for (int twoS = 1; twoS <= 7; ++twoS) {
    const Spin s{twoS};
    const int K = twoS;
    const auto dim = Eigen::Index{1} << K;
    ComplexMatrix sx = ComplexMatrix::Zero(dim, dim), sy = sx, sz = sx;
    for (Eigen::Index r = 0; r < dim; ++r)
      for (int q = 0; q < K; ++q) {
        const bool bit = (r >> q) & 1;
        sx(r ^ (Eigen::Index{1} << q), r) += 0.5;
        sy(r ^ (Eigen::Index{1} << q), r) += bit ? cplx{0, -0.5} : cplx{0, 0.5};
        sz(r, r) += bit ? -0.5 : 0.5;  // |0> is spin up
      }
    const ComplexMatrix s2 = sx * sx + sy * sy + sz * sz;
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      const ComplexVector v = dicke_state_vector(s, twoM);
      EXPECT_LT((s2 * v - s.value() * (s.value() + 1) * v).norm(), 1e-10);
      EXPECT_NEAR((v.adjoint() * sz * v)(0).real(), 0.5 * twoM, 1e-12);
    }
  }
}

TEST(Dicke, SpinOneCircuitAction) {
  const ComplexMatrix u = circuit_unitary(dicke_circuit(Spin{2}));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(3, 3)), 1.0, 1e-12);
  EXPECT_NEAR(u(1, 1).real(), r, 1e-12);
  EXPECT_NEAR(u(2, 1).real(), r, 1e-12);
}

TEST(Dicke, SpinThreeHalvesRotations) {
  const Circuit c = dicke_circuit(Spin{3});
  std::vector<double> angles;
  for (const auto& g : c.gates)
    if (const auto* r = std::get_if<ControlledRY>(&g)) angles.push_back(r->angle);
  ASSERT_EQ(angles.size(), 3u);
  ComplexMatrix a0(2, 2), a1(2, 2);
  a0 << 1, -std::sqrt(2.0), std::sqrt(2.0), 1;
  a1 << std::sqrt(2.0), -1, 1, std::sqrt(2.0);
  a0 /= std::sqrt(3.0);
  a1 /= std::sqrt(3.0);
  EXPECT_LT((ry(angles[0]) - a0).norm(), 1e-12);
  EXPECT_LT((ry(angles[1]) - a1).norm(), 1e-12);
}

TEST(Circuit, InverseUndoes) {
  const Circuit c = dicke_circuit(Spin{4}, 1, 6);
  const ComplexMatrix u = circuit_unitary(c), v = circuit_unitary(inverse_circuit(c));
  EXPECT_LT((v * u - ComplexMatrix::Identity(64, 64)).norm(), 1e-10);
  Circuit bad;
  bad.width = 1;
  bad.append(LevelSet{0, 1});
  EXPECT_THROW(inverse_circuit(bad), ValidationError);
}
