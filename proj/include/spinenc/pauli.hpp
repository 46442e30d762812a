#pragma once

// Pauli strings on K qubits and generalized Gell-Mann strings on N qudits,
// plus decomposition of dense matrices into either basis.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spinenc/errors.hpp"
#include "spinenc/spincore.hpp"

namespace spinenc {

inline constexpr double kCoefficientCutoff = 1e-12;

// Stored as X and Z bit masks; Y sets both. Qubit 0 is bit 0 and the
// rightmost character of the text form.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int width, std::uint64_t xMask, std::uint64_t zMask) : width_{width}, x_{xMask}, z_{zMask} {
    require(width >= 1 && width <= 64, "pauli: width must be in [1, 64]");
    const std::uint64_t full = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    require(((x_ | z_) & ~full) == 0, "pauli: mask exceeds register width");
  }

  static PauliString identity(int width) { return {width, 0, 0}; }

  static PauliString parse(std::string_view text) {
    const int width = static_cast<int>(text.size());
    require(width >= 1 && width <= 64, "pauli: string length must be in [1, 64]");
    std::uint64_t x = 0, z = 0;
    for (int pos = 0; pos < width; ++pos) {
      const std::uint64_t bit = std::uint64_t{1} << (width - 1 - pos);
      switch (text[pos]) {
        case 'I': break;
        case 'X': x |= bit; break;
        case 'Y': x |= bit; z |= bit; break;
        case 'Z': z |= bit; break;
        default: throw ValidationError("pauli: bad character '" + std::string(1, text[pos]) + "'");
      }
    }
    return {width, x, z};
  }

  int width() const { return width_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }
  int weight() const { return std::popcount(support()); }
  bool is_identity() const { return support() == 0; }

  char op(int qubit) const {
    const bool hx = (x_ >> qubit) & 1U, hz = (z_ >> qubit) & 1U;
    return hx ? (hz ? 'Y' : 'X') : (hz ? 'Z' : 'I');
  }

  std::string to_string() const {
    std::string s(width_, 'I');
    for (int q = 0; q < width_; ++q) s[width_ - 1 - q] = op(q);
    return s;
  }

  // Places this string at qubit offset `shift` inside a wider register.
  PauliString embedded(int newWidth, int shift) const {
    require(shift >= 0 && shift + width_ <= newWidth, "pauli: embedding out of range");
    return {newWidth, x_ << shift, z_ << shift};
  }

  // Tensor product on disjoint supports of equal width.
  PauliString combined(const PauliString& other) const {
    require(width_ == other.width_, "pauli: width mismatch");
    require((support() & other.support()) == 0, "pauli: overlapping supports");
    return {width_, x_ | other.x_, z_ | other.z_};
  }

  // P|r> = phase(r) |r ^ x>.
  cplx phase(std::uint64_t r) const {
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int k = std::popcount(x_ & z_) + 2 * (std::popcount(r & z_) & 1);
    return kIPow[k & 3];
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int width_ = 1;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const {
    return std::hash<std::uint64_t>{}(p.x_mask() * 0x9E3779B97F4A7C15ULL ^ p.z_mask());
  }
};

struct PauliTerm {
  double coeff;
  PauliString string;
};

// Real-weighted sum of distinct Pauli strings. Identity goes to offset().
// Insertion order is kept; it is the Trotter gate order.
class PauliSum {
 public:
  explicit PauliSum(int width) : width_{width} { require(width >= 1 && width <= 64, "pauli sum: bad width"); }

  int width() const { return width_; }
  double offset() const { return offset_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(double coeff, const PauliString& p) {
    require(p.width() == width_, "pauli sum: width mismatch");
    if (p.is_identity()) {
      offset_ += coeff;
      return;
    }
    auto [it, inserted] = index_.try_emplace(p, terms_.size());
    if (inserted) terms_.push_back({coeff, p});
    else terms_[it->second].coeff += coeff;
  }

  void add_offset(double value) { offset_ += value; }

  // Drops terms with |h| <= cutoff, keeping the order of the survivors.
  void prune(double cutoff = kCoefficientCutoff) {
    std::erase_if(terms_, [cutoff](const PauliTerm& t) { return std::abs(t.coeff) <= cutoff; });
    index_.clear();
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].string, i);
    if (std::abs(offset_) <= cutoff) offset_ = 0.0;
  }

  // 0 when absent.
  double coefficient(const PauliString& p) const {
    if (p.is_identity()) return offset_;
    auto it = index_.find(p);
    return it == index_.end() ? 0.0 : terms_[it->second].coeff;
  }
  double coefficient(std::string_view text) const { return coefficient(PauliString::parse(text)); }

 private:
  int width_;
  std::vector<PauliTerm> terms_;
  std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
  double offset_ = 0.0;
};

inline ComplexMatrix pauli_matrix(const PauliString& p) {
  require(p.width() <= 14, "pauli_matrix: width too large for a dense matrix");
  const std::uint64_t dim = std::uint64_t{1} << p.width();
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < dim; ++r) m(static_cast<Eigen::Index>(r ^ p.x_mask()), static_cast<Eigen::Index>(r)) = p.phase(r);
  return m;
}

inline ComplexMatrix pauli_sum_matrix(const PauliSum& sum) {
  require(sum.width() <= 14, "pauli_sum_matrix: width too large for a dense matrix");
  const std::uint64_t dim = std::uint64_t{1} << sum.width();
  ComplexMatrix m = sum.offset() * ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : sum.terms())
    for (std::uint64_t r = 0; r < dim; ++r)
      m(static_cast<Eigen::Index>(r ^ t.string.x_mask()), static_cast<Eigen::Index>(r)) += t.coeff * t.string.phase(r);
  return m;
}

inline void require_hermitian(const ComplexMatrix& m, double tol, const std::string& who) {
  require(m.rows() == m.cols(), who + ": matrix must be square");
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol, who + ": matrix is not Hermitian");
}

// Coefficients Tr(P m)/2^K for every string, indexed x * 2^K + z. One
// Walsh-Hadamard transform per flip mask: O(K 4^K).
inline std::vector<cplx> pauli_coefficients(const ComplexMatrix& m, int K) {
  require(K >= 1 && K <= 13, "pauli decomposition: K must be in [1, 13]");
  const std::uint64_t dim = std::uint64_t{1} << K;
  require(static_cast<std::uint64_t>(m.rows()) == dim && m.rows() == m.cols(), "pauli decomposition: matrix must be 2^K square");
  std::vector<cplx> out(dim * dim);
  std::vector<cplx> v(dim);
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t s = 0; s < dim; ++s) v[s] = m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s ^ x));
    for (std::uint64_t h = 1; h < dim; h <<= 1)
      for (std::uint64_t i = 0; i < dim; i += 2 * h)
        for (std::uint64_t j = i; j < i + h; ++j) {
          const cplx a = v[j], b = v[j + h];
          v[j] = a + b;
          v[j + h] = a - b;
        }
    for (std::uint64_t z = 0; z < dim; ++z)
      out[x * dim + z] = kIPow[std::popcount(x & z) & 3] * v[z] / static_cast<double>(dim);
  }
  return out;
}

inline PauliSum decompose_qubit_operator(const ComplexMatrix& m, int K) {
  require_hermitian(m, 1e-10, "decompose_qubit_operator");
  const auto coeffs = pauli_coefficients(m, K);
  const std::uint64_t dim = std::uint64_t{1} << K;
  PauliSum sum(K);
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z) {
      const double h = coeffs[x * dim + z].real();
      if (std::abs(h) > kCoefficientCutoff) sum.add(h, PauliString(K, x, z));
    }
  return sum;
}

// ---------------------------------------------------------------------------
// Generalized Gell-Mann matrices, 1-based k in [1, d^2]:
//   k = 1: sqrt(2/d) I
//   then for j = 2..d: X-like and Y-like for each l = 1..j-1, then Z-like(j).
// The Y-like sign is chosen so that d = 2 gives the Pauli Y.

inline ComplexMatrix gell_mann(int d, int k) {
  require(d >= 2, "gell_mann: d must be >= 2");
  require(k >= 1 && k <= d * d, "gell_mann: index " + std::to_string(k) + " out of range for d=" + std::to_string(d));
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  if (k == 1) {
    m.diagonal().setConstant(std::sqrt(2.0 / d));
    return m;
  }
  int idx = 2;
  for (int j = 2; j <= d; ++j) {
    for (int l = 1; l < j; ++l) {
      if (idx == k) {
        m(j - 1, l - 1) = 1.0;
        m(l - 1, j - 1) = 1.0;
        return m;
      }
      if (idx + 1 == k) {
        m(j - 1, l - 1) = cplx{0.0, 1.0};
        m(l - 1, j - 1) = cplx{0.0, -1.0};
        return m;
      }
      idx += 2;
    }
    if (idx == k) {
      const double norm = std::sqrt(2.0 / (j * (j - 1.0)));
      for (int mm = 1; mm < j; ++mm) m(mm - 1, mm - 1) = norm;
      m(j - 1, j - 1) = norm * (1.0 - j);
      return m;
    }
    ++idx;
  }
  return m;
}

// Per-site entries are Gell-Mann indices; 1 marks an idle site (plain
// identity, not the scaled lambda_1).
class GellMannString {
 public:
  GellMannString(int d, std::vector<int> ops) : d_{d}, ops_{std::move(ops)} {
    require(d >= 2, "gell-mann string: d must be >= 2");
    require(!ops_.empty(), "gell-mann string: empty");
    for (int k : ops_) require(k >= 1 && k <= d * d, "gell-mann string: index out of range");
  }

  int levels() const { return d_; }
  int sites() const { return static_cast<int>(ops_.size()); }
  int op(int site) const { return ops_.at(site); }
  const std::vector<int>& ops() const { return ops_; }

  std::vector<int> support() const {
    std::vector<int> out;
    for (int n = 0; n < sites(); ++n)
      if (ops_[n] != 1) out.push_back(n);
    return out;
  }
  int weight() const { return static_cast<int>(support().size()); }

  // "l7 l2" style, highest site first.
  std::string to_string() const {
    std::string s;
    for (int n = sites() - 1; n >= 0; --n) {
      s += "l" + std::to_string(ops_[n]);
      if (n > 0) s += ' ';
    }
    return s;
  }

  friend bool operator==(const GellMannString&, const GellMannString&) = default;
  friend auto operator<=>(const GellMannString& a, const GellMannString& b) {
    // Highest site compared first, matching the printed order.
    return std::lexicographical_compare_three_way(a.ops_.rbegin(), a.ops_.rend(), b.ops_.rbegin(), b.ops_.rend());
  }

 private:
  int d_;
  std::vector<int> ops_;
};

struct GellMannTerm {
  double coeff;
  GellMannString string;
};

class GellMannSum {
 public:
  GellMannSum(int d, int nSites) : d_{d}, nSites_{nSites} {}

  int levels() const { return d_; }
  int sites() const { return nSites_; }
  double offset() const { return offset_; }
  const std::vector<GellMannTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(double coeff, const GellMannString& g) {
    require(g.levels() == d_ && g.sites() == nSites_, "gell-mann sum: shape mismatch");
    if (g.weight() == 0) {
      offset_ += coeff;
      return;
    }
    for (auto& t : terms_)
      if (t.string == g) {
        t.coeff += coeff;
        return;
      }
    terms_.push_back({coeff, g});
  }

  void add_offset(double value) { offset_ += value; }

  void prune(double cutoff = kCoefficientCutoff) {
    std::erase_if(terms_, [cutoff](const GellMannTerm& t) { return std::abs(t.coeff) <= cutoff; });
    if (std::abs(offset_) <= cutoff) offset_ = 0.0;
  }

  void sort() {
    std::stable_sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.string < b.string; });
  }

  double coefficient(const GellMannString& g) const {
    for (const auto& t : terms_)
      if (t.string == g) return t.coeff;
    return 0.0;
  }

 private:
  int d_;
  int nSites_;
  std::vector<GellMannTerm> terms_;
  double offset_ = 0.0;
};

struct GellMannComponent {
  double coeff;
  int index;
};

struct QuditDecomposition {
  std::vector<GellMannComponent> components;  // k >= 2 only
  double identity = 0.0;                      // coefficient of the plain identity
  double lambda1 = 0.0;                       // same part expressed on lambda_1
};

inline QuditDecomposition decompose_qudit_operator(const ComplexMatrix& m) {
  require_hermitian(m, 1e-10, "decompose_qudit_operator");
  const int d = static_cast<int>(m.rows());
  require(d >= 2, "decompose_qudit_operator: d must be >= 2");
  QuditDecomposition out;
  out.lambda1 = (gell_mann(d, 1) * m).trace().real() / 2.0;
  out.identity = m.trace().real() / d;
  for (int k = 2; k <= d * d; ++k) {
    const double g = (gell_mann(d, k) * m).trace().real() / 2.0;
    if (std::abs(g) > kCoefficientCutoff) out.components.push_back({g, k});
  }
  return out;
}

// Dense matrix of a Gell-Mann string, site 0 least significant.
inline ComplexMatrix gell_mann_string_matrix(const GellMannString& g) {
  const int d = g.levels();
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int n = g.sites() - 1; n >= 0; --n) {
    const ComplexMatrix f = g.op(n) == 1 ? ComplexMatrix::Identity(d, d) : gell_mann(d, g.op(n));
    out = kron(out, f);
  }
  return out;
}

inline ComplexMatrix gell_mann_sum_matrix(const GellMannSum& sum) {
  double dim = std::pow(sum.levels(), sum.sites());
  require(dim <= 4096, "gell_mann_sum_matrix: dimension too large");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = sum.offset() * ComplexMatrix::Identity(n, n);
  for (const auto& t : sum.terms()) m += t.coeff * gell_mann_string_matrix(t.string);
  return m;
}

}  // namespace spinenc
