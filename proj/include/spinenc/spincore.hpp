#pragma once

// Exact spin-space model of a uniform spin-S Heisenberg lattice.
//
// Conventions used everywhere in the library:
//   * J = hbar = 1, times are the dimensionless Jt/hbar.
//   * Per-site basis is ascending M: level l = M + S, l = 0 <-> M = -S.
//   * Site 0 is the least-significant tensor factor, so a basis index is
//     sum_n l_n * d^n with d = 2S + 1, matching |M_{N-1}, ..., M_0>.
//   * Half-integers are stored doubled (twoS, twoM).

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinenc/errors.hpp"

namespace spinenc {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr std::uint64_t kDefaultMaxDenseDim = std::uint64_t{1} << 21;

class Spin {
 public:
  explicit Spin(int twoS) : twoS_{twoS} {
    require(twoS >= 1, "spin: twoS must be >= 1, got " + std::to_string(twoS));
  }

  int twice() const { return twoS_; }
  double value() const { return 0.5 * twoS_; }
  int levels() const { return twoS_ + 1; }

  // Level index l = M + S for a doubled magnetic quantum number.
  int level_of(int twoM) const {
    require(is_valid_twice_m(twoM), "spin: 2M=" + std::to_string(twoM) +
                                        " invalid for 2S=" + std::to_string(twoS_));
    return (twoM + twoS_) / 2;
  }
  int twice_m_of_level(int level) const { return 2 * level - twoS_; }

  bool is_valid_twice_m(int twoM) const {
    return twoM >= -twoS_ && twoM <= twoS_ && ((twoM + twoS_) % 2 == 0);
  }

  std::string to_string() const {
    return twoS_ % 2 == 0 ? std::to_string(twoS_ / 2) : std::to_string(twoS_) + "/2";
  }

  friend bool operator==(const Spin&, const Spin&) = default;

 private:
  int twoS_;
};

// |M_{N-1}, ..., M_0>, stored by site index (entry n is 2*M_n).
class LatticeBasisState {
 public:
  LatticeBasisState(Spin spin, std::vector<int> twiceM) : spin_{spin}, twoM_{std::move(twiceM)} {
    require(!twoM_.empty(), "lattice state: need at least one site");
    for (int m : twoM_) spin_.level_of(m);
  }

  static LatticeBasisState from_index(Spin spin, int nSites, std::uint64_t index) {
    std::vector<int> twoM(nSites);
    const auto d = static_cast<std::uint64_t>(spin.levels());
    for (int n = 0; n < nSites; ++n) {
      twoM[n] = spin.twice_m_of_level(static_cast<int>(index % d));
      index /= d;
    }
    require(index == 0, "lattice state: index out of range");
    return {spin, std::move(twoM)};
  }

  Spin spin() const { return spin_; }
  int sites() const { return static_cast<int>(twoM_.size()); }
  int twice_m(int site) const { return twoM_.at(site); }
  double m(int site) const { return 0.5 * twoM_.at(site); }
  int level(int site) const { return spin_.level_of(twoM_.at(site)); }
  const std::vector<int>& twice_m_values() const { return twoM_; }

  int twice_total() const {
    int total = 0;
    for (int v : twoM_) total += v;
    return total;
  }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (int n = sites() - 1; n >= 0; --n) idx = idx * spin_.levels() + level(n);
    return idx;
  }

  // Paper-style ket, highest site first: "|-1,1>" or "|-3/2,3/2>".
  std::string to_string() const {
    std::ostringstream os;
    os << '|';
    for (int n = sites() - 1; n >= 0; --n) {
      const int v = twoM_[n];
      if (spin_.twice() % 2 == 0) os << v / 2;
      else os << v << "/2";
      if (n > 0) os << ',';
    }
    os << '>';
    return os.str();
  }

  friend bool operator==(const LatticeBasisState&, const LatticeBasisState&) = default;

 private:
  Spin spin_;
  std::vector<int> twoM_;
};

using Edge = std::pair<int, int>;

class Lattice {
 public:
  Lattice(int nSites, std::vector<Edge> edges, Spin spin)
      : nSites_{nSites}, edges_{std::move(edges)}, spin_{spin} {
    require(nSites >= 1, "lattice: need at least one site");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [a, b] = edges_[i];
      require(a >= 0 && a < nSites && b >= 0 && b < nSites,
              "lattice: edge endpoint out of range");
      require(a != b, "lattice: self-edge on site " + std::to_string(a));
      for (std::size_t j = 0; j < i; ++j) {
        const auto [c, e] = edges_[j];
        require(!((a == c && b == e) || (a == e && b == c)), "lattice: duplicate edge");
      }
    }
  }

  static Lattice open_chain(int nSites, Spin spin) {
    std::vector<Edge> edges;
    for (int n = 0; n + 1 < nSites; ++n) edges.emplace_back(n, n + 1);
    return {nSites, std::move(edges), spin};
  }

  int sites() const { return nSites_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Spin spin() const { return spin_; }

  // (2S+1)^N, saturating at UINT64_MAX.
  std::uint64_t hilbert_dim() const {
    std::uint64_t dim = 1;
    const auto d = static_cast<std::uint64_t>(spin_.levels());
    for (int n = 0; n < nSites_; ++n) {
      if (dim > UINT64_MAX / d) return UINT64_MAX;
      dim *= d;
    }
    return dim;
  }

 private:
  int nSites_;
  std::vector<Edge> edges_;
  Spin spin_;
};

class DenseHermitian {
 public:
  explicit DenseHermitian(ComplexMatrix m, double tol = 1e-12) : m_{std::move(m)} {
    require(m_.rows() == m_.cols() && m_.rows() > 0, "hermitian: matrix must be square");
    require((m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol, "hermitian: matrix is not Hermitian");
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

struct SpinMatrices {
  ComplexMatrix sz;
  ComplexMatrix splus;
  ComplexMatrix sminus;

  ComplexMatrix sx() const { return 0.5 * (splus + sminus); }
  ComplexMatrix sy() const { return cplx{0.0, -0.5} * (splus - sminus); }
};

// S^+ matrix element <M+1|S^+|M>.
inline double raising_amplitude(Spin spin, int twoM) {
  const double s = spin.value();
  const double m = 0.5 * twoM;
  return std::sqrt(s * (s + 1.0) - m * (m + 1.0));
}

inline SpinMatrices spin_matrices(Spin spin) {
  const int d = spin.levels();
  SpinMatrices out{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
  for (int l = 0; l < d; ++l) {
    const int twoM = spin.twice_m_of_level(l);
    out.sz(l, l) = 0.5 * twoM;
    if (l + 1 < d) out.splus(l + 1, l) = raising_amplitude(spin, twoM);
  }
  out.sminus = out.splus.adjoint();
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// I ⊗ ... ⊗ opA ⊗ ... ⊗ opB ⊗ ... ⊗ I with site 0 rightmost.
inline ComplexMatrix embed_site_pair(const ComplexMatrix& opA, int siteA, const ComplexMatrix& opB,
                                     int siteB, int nSites) {
  const Eigen::Index d = opA.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int n = nSites - 1; n >= 0; --n) {
    const ComplexMatrix& f = n == siteA ? opA : (n == siteB ? opB : id);
    out = kron(out, f);
  }
  return out;
}

inline void check_dense_dim(std::uint64_t dim, std::uint64_t maxDim, const std::string& what) {
  if (dim > maxDim)
    throw ResourceError(what + ": dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(maxDim));
}

inline DenseHermitian build_heisenberg(const Lattice& lattice,
                                       std::uint64_t maxDim = kDefaultMaxDenseDim) {
  const std::uint64_t dim = lattice.hilbert_dim();
  check_dense_dim(dim, maxDim, "build_heisenberg");
  const SpinMatrices sm = spin_matrices(lattice.spin());
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [m, n] : lattice.edges()) {
    h += embed_site_pair(sm.sz, m, sm.sz, n, lattice.sites());
    h += 0.5 * embed_site_pair(sm.splus, m, sm.sminus, n, lattice.sites());
    h += 0.5 * embed_site_pair(sm.sminus, m, sm.splus, n, lattice.sites());
  }
  return DenseHermitian{std::move(h)};
}

// Diagonal of S^z_tot (doubled) per basis index.
inline std::vector<int> twice_total_sz_diagonal(const Lattice& lattice) {
  const auto dim = lattice.hilbert_dim();
  std::vector<int> out(dim);
  for (std::uint64_t i = 0; i < dim; ++i)
    out[i] = LatticeBasisState::from_index(lattice.spin(), lattice.sites(), i).twice_total();
  return out;
}

inline ComplexVector basis_vector(std::uint64_t dim, std::uint64_t index) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

// Diagonalizes once; propagates any number of states and times.
class ExactPropagator {
 public:
  explicit ExactPropagator(const DenseHermitian& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw std::runtime_error("exact propagator: eigensolver failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  ComplexVector propagate(const ComplexVector& state, double t) const {
    require(state.size() == vectors_.rows(), "exact_propagate: state dimension mismatch");
    require(std::abs(state.norm() - 1.0) <= 1e-10, "exact_propagate: state is not normalized");
    ComplexVector coeffs = vectors_.adjoint() * state;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(cplx{0.0, -energies_(k) * t});
    return vectors_ * coeffs;
  }

  // e^{-iHt} as a dense matrix.
  ComplexMatrix unitary(double t) const {
    ComplexVector phases(energies_.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(cplx{0.0, -energies_(k) * t});
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

  const Eigen::VectorXd& energies() const { return energies_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }

 private:
  Eigen::VectorXd energies_;
  ComplexMatrix vectors_;
};

inline ComplexVector exact_propagate(const DenseHermitian& h, const ComplexVector& state, double t) {
  return ExactPropagator{h}.propagate(state, t);
}

inline double expectation(const DenseHermitian& h, const ComplexVector& state) {
  return state.dot(h.matrix() * state).real();
}

// <S^z_a S^z_b> in units of hbar^2 for a spin-space state.
inline double szsz_expectation(const Lattice& lattice, const ComplexVector& state, int siteA, int siteB) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double p = std::norm(state(i));
    if (p == 0.0) continue;
    const auto s = LatticeBasisState::from_index(lattice.spin(), lattice.sites(), static_cast<std::uint64_t>(i));
    acc += p * s.m(siteA) * s.m(siteB);
  }
  return acc;
}

// Second-order perturbative <S^z_0 S^z_3>/(hbar S)^2 for the four-site chain
// started in |-S,-S,-S,S>.
inline double pt2_correlator(Spin spin, double t) { return -1.0 + spin.value() * t * t; }

}  // namespace spinenc
