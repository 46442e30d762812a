#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinenc/pauli.hpp"

using namespace spinenc;

namespace {
ComplexMatrix single(char c) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (c) {
    case 'I': m(0, 0) = m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cplx{0, -1}; m(1, 0) = cplx{0, 1}; break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

// Leftmost character is the most significant tensor factor.
ComplexMatrix reference(const std::string& s) {
  ComplexMatrix m = ComplexMatrix::Identity(1, 1);
  for (char c : s) m = kron(m, single(c));
  return m;
}

ComplexMatrix random_hermitian(int dim, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx{g(rng), g(rng)};
  return a + a.adjoint();
}
}  // namespace

TEST(PauliString, ParsePrintRoundTrip) {
  for (const char* s : {"I", "XYZI", "ZZZZZZ", "IXIYIZ"}) EXPECT_EQ(PauliString::parse(s).to_string(), s);
  const auto p = PauliString::parse("XIZY");
  EXPECT_EQ(p.op(0), 'Y');
  EXPECT_EQ(p.op(3), 'X');
  EXPECT_EQ(p.weight(), 3);
  EXPECT_THROW(PauliString::parse("XQ"), ValidationError);
  EXPECT_THROW(PauliString::parse(""), ValidationError);
}

TEST(PauliString, MatrixMatchesKronecker) {
  for (const char* s : {"X", "Y", "Z", "XY", "YZ", "ZIX", "YYXZ"})
    EXPECT_LT((pauli_matrix(PauliString::parse(s)) - reference(s)).norm(), 1e-14) << s;
}

TEST(PauliString, PhaseConvention) {
  // Y|0> = i|1>, Y|1> = -i|0>
  const auto y = PauliString::parse("Y");
  EXPECT_EQ(y.phase(0), cplx(0, 1));
  EXPECT_EQ(y.phase(1), cplx(0, -1));
}

TEST(PauliSum, MergesAndRoutesIdentity) {
  PauliSum s(2);
  s.add(0.5, PauliString::parse("XX"));
  s.add(0.25, PauliString::parse("XX"));
  s.add(2.0, PauliString::identity(2));
  s.add(1e-14, PauliString::parse("ZI"));
  s.prune();
  EXPECT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.coefficient("XX"), 0.75);
  EXPECT_DOUBLE_EQ(s.offset(), 2.0);
  EXPECT_DOUBLE_EQ(s.coefficient("ZZ"), 0.0);
}

TEST(Decompose, SwapIsHalfSumOfPairs) {
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  const PauliSum s = decompose_qubit_operator(swap, 2);
  EXPECT_EQ(s.size(), 3u);
  for (const char* p : {"XX", "YY", "ZZ"}) EXPECT_NEAR(s.coefficient(p), 0.5, 1e-14);
  EXPECT_NEAR(s.offset(), 0.5, 1e-14);
}

TEST(Decompose, RandomHermitianReconstructs) {
  for (int K = 1; K <= 5; ++K) {
    const ComplexMatrix m = random_hermitian(1 << K, 17 + K);
    const PauliSum s = decompose_qubit_operator(m, K);
    EXPECT_LT((pauli_sum_matrix(s) - m).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Decompose, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(decompose_qubit_operator(m, 1), ValidationError);
}

TEST(GellMann, TraceOrthonormality) {
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k <= d * d; ++k) {
      const ComplexMatrix a = gell_mann(d, k);
      EXPECT_LT((a - a.adjoint()).norm(), 1e-15);
      if (k >= 2) {
        EXPECT_NEAR(std::abs(a.trace()), 0.0, 1e-14);
      }
      for (int l = 1; l <= d * d; ++l) EXPECT_NEAR(std::abs((a * gell_mann(d, l)).trace() - (k == l ? 2.0 : 0.0)), 0.0, 1e-13);
    }
}

TEST(GellMann, ReducesToPauliAndStandardSet) {
  EXPECT_LT((gell_mann(2, 2) - single('X')).norm(), 1e-15);
  EXPECT_LT((gell_mann(2, 3) - single('Y')).norm(), 1e-15);
  EXPECT_LT((gell_mann(2, 4) - single('Z')).norm(), 1e-15);
  // Original 3x3 Gell-Mann lambda_2, lambda_5, lambda_8 in this ordering.
  ComplexMatrix l2 = ComplexMatrix::Zero(3, 3), l5 = l2, l8 = l2;
  l2(0, 1) = cplx{0, -1}, l2(1, 0) = cplx{0, 1};
  l5(0, 2) = cplx{0, -1}, l5(2, 0) = cplx{0, 1};
  l8(0, 0) = l8(1, 1) = 1.0 / std::sqrt(3.0), l8(2, 2) = -2.0 / std::sqrt(3.0);
  EXPECT_LT((gell_mann(3, 3) - l2).norm(), 1e-15);
  EXPECT_LT((gell_mann(3, 6) - l5).norm(), 1e-15);
  EXPECT_LT((gell_mann(3, 9) - l8).norm(), 1e-15);
  EXPECT_THROW(gell_mann(3, 10), ValidationError);
}

TEST(GellMann, DecompositionReconstructs) {
  for (int d = 2; d <= 5; ++d) {
    const ComplexMatrix m = random_hermitian(d, 100 + d);
    const auto dec = decompose_qudit_operator(m);
    ComplexMatrix r = dec.identity * ComplexMatrix::Identity(d, d);
    for (const auto& c : dec.components) r += c.coeff * gell_mann(d, c.index);
    EXPECT_LT((r - m).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(dec.lambda1 * std::sqrt(2.0 / d), dec.identity, 1e-12);
  }
}

TEST(GellMannString, TextAndOrdering) {
  const GellMannString a(3, {2, 7}), b(3, {7, 2}), idle(3, {1, 4});
  EXPECT_EQ(a.to_string(), "l7 l2");
  EXPECT_TRUE(b < a);  // highest site compared first
  EXPECT_EQ(idle.weight(), 1);
  EXPECT_LT((gell_mann_string_matrix(a) - kron(gell_mann(3, 7), gell_mann(3, 2))).norm(), 1e-14);
  EXPECT_THROW(GellMannString(3, {0, 2}), ValidationError);
}
