#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sylch/field.hpp"

namespace sylch {

enum class GroupType { B, C, D };

inline char type_char(GroupType t) {
  switch (t) {
    case GroupType::B: return 'B';
    case GroupType::C: return 'C';
    default: return 'D';
  }
}

inline GroupType type_from_char(char c) {
  switch (c) {
    case 'B': case 'b': return GroupType::B;
    case 'C': case 'c': return GroupType::C;
    case 'D': case 'd': return GroupType::D;
    default: throw std::invalid_argument(std::string("unknown group type '") + c + "'");
  }
}

/// Which classical form the ambient matrices respect: type B lives in odd
/// dimension m = 2n+1, types C and D in m = 2n.
struct FormTag {
  GroupType type;
  int n;
  int m;
};

inline FormTag make_tag(GroupType t, int n) {
  if (n < 1) throw std::invalid_argument("rank n must be >= 1");
  return FormTag{t, n, t == GroupType::B ? 2 * n + 1 : 2 * n};
}

/// Square matrix over F_p, row-major, 0-based indices.
class Mat {
 public:
  Mat(int m, uint32_t p) : m_(m), p_(p), a_(size_t(m) * m, 0) {
    require_odd_prime(p);
    if (m < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  }

  static Mat identity(int m, uint32_t p) {
    Mat r(m, p);
    for (int i = 0; i < m; ++i) r.set(i, i, 1);
    return r;
  }

  /// Elementary matrix unit E_ij.
  static Mat unit(int m, uint32_t p, int i, int j) {
    Mat r(m, p);
    r.set(i, j, 1);
    return r;
  }

  int dim() const { return m_; }
  uint32_t modulus() const { return p_; }

  uint32_t at(int i, int j) const { return a_[size_t(i) * m_ + j]; }
  void set(int i, int j, int64_t v) {
    int64_t r = v % int64_t(p_);
    if (r < 0) r += p_;
    a_[size_t(i) * m_ + j] = uint32_t(r);
  }

  Fp entry(int i, int j) const { return Fp::raw(at(i, j), p_); }

  Mat operator+(const Mat& o) const {
    check(o);
    Mat r(m_, p_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = (a_[k] + o.a_[k]) % p_;
    return r;
  }

  Mat operator-(const Mat& o) const {
    check(o);
    Mat r(m_, p_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = (a_[k] + p_ - o.a_[k]) % p_;
    return r;
  }

  Mat operator-() const {
    Mat r(m_, p_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] == 0 ? 0 : p_ - a_[k];
    return r;
  }

  Mat operator*(const Mat& o) const {
    check(o);
    Mat r(m_, p_);
    for (int i = 0; i < m_; ++i)
      for (int k = 0; k < m_; ++k) {
        uint64_t v = a_[size_t(i) * m_ + k];
        if (!v) continue;
        const uint32_t* orow = &o.a_[size_t(k) * m_];
        uint32_t* rrow = &r.a_[size_t(i) * m_];
        for (int j = 0; j < m_; ++j) rrow[j] = uint32_t((rrow[j] + v * orow[j]) % p_);
      }
    return r;
  }

  Mat scaled(const Fp& s) const {
    Mat r(m_, p_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = uint32_t(uint64_t(a_[k]) * s.val() % p_);
    return r;
  }

  bool operator==(const Mat& o) const { return m_ == o.m_ && p_ == o.p_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  bool is_zero() const {
    for (auto v : a_)
      if (v) return false;
    return true;
  }

  bool is_upper_unitriangular() const {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j <= i; ++j)
        if (at(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
  }

  bool is_strictly_upper() const {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j <= i; ++j)
        if (at(i, j) != 0) return false;
    return true;
  }

  Mat transpose() const {
    Mat r(m_, p_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) r.set(j, i, at(i, j));
    return r;
  }

  /// Transpose across the antidiagonal: out(i,j) = in(m-1-j, m-1-i).
  Mat antitranspose() const {
    Mat r(m_, p_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) r.set(i, j, at(m_ - 1 - j, m_ - 1 - i));
    return r;
  }

  /// Inverse of an upper unitriangular matrix by back substitution.
  Mat inverse_unitriangular() const {
    if (!is_upper_unitriangular()) throw std::domain_error("matrix is not upper unitriangular");
    // (1 + N)^{-1} = 1 - N + N^2 - ... with N strictly upper, N^m = 0
    Mat n = *this - identity(m_, p_);
    Mat acc = identity(m_, p_);
    Mat pw = identity(m_, p_);
    for (int k = 1; k < m_; ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = (k % 2 == 1) ? acc - pw : acc + pw;
    }
    return acc;
  }

  /// General inverse via Gauss-Jordan; throws on singular input.
  Mat inverse() const {
    Mat a = *this;
    Mat r = identity(m_, p_);
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      for (int i = col; i < m_; ++i)
        if (a.at(i, col) != 0) { piv = i; break; }
      if (piv < 0) throw std::domain_error("singular matrix");
      a.swap_rows(piv, col);
      r.swap_rows(piv, col);
      uint32_t inv = Fp::raw(a.at(col, col), p_).inv().val();
      a.scale_row(col, inv);
      r.scale_row(col, inv);
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        uint32_t f = a.at(i, col);
        if (!f) continue;
        a.add_row_multiple(i, col, p_ - f);
        r.add_row_multiple(i, col, p_ - f);
      }
    }
    return r;
  }

  int rank() const {
    Mat a = *this;
    int rk = 0;
    for (int col = 0; col < m_ && rk < m_; ++col) {
      int piv = -1;
      for (int i = rk; i < m_; ++i)
        if (a.at(i, col) != 0) { piv = i; break; }
      if (piv < 0) continue;
      a.swap_rows(piv, rk);
      uint32_t inv = Fp::raw(a.at(rk, col), p_).inv().val();
      a.scale_row(rk, inv);
      for (int i = rk + 1; i < m_; ++i) {
        uint32_t f = a.at(i, col);
        if (f) a.add_row_multiple(i, rk, p_ - f);
      }
      ++rk;
    }
    return rk;
  }

  /// Determinant of the submatrix on the given row and column index lists
  /// (0-based, must have equal sizes; empty lists give 1).
  Fp minor_det(const std::vector<int>& rows, const std::vector<int>& cols) const {
    if (rows.size() != cols.size()) throw std::domain_error("minor requires a square selection");
    int k = int(rows.size());
    if (k == 0) return Fp(1, p_);
    std::vector<uint32_t> s(size_t(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) s[size_t(i) * k + j] = at(rows[i], cols[j]);
    // Gaussian elimination tracking the determinant
    Fp det(1, p_);
    for (int col = 0; col < k; ++col) {
      int piv = -1;
      for (int i = col; i < k; ++i)
        if (s[size_t(i) * k + col] != 0) { piv = i; break; }
      if (piv < 0) return Fp(0, p_);
      if (piv != col) {
        for (int j = 0; j < k; ++j) std::swap(s[size_t(piv) * k + j], s[size_t(col) * k + j]);
        det = -det;
      }
      Fp pv = Fp::raw(s[size_t(col) * k + col], p_);
      det = det * pv;
      uint32_t inv = pv.inv().val();
      for (int i = col + 1; i < k; ++i) {
        uint64_t f = uint64_t(s[size_t(i) * k + col]) * inv % p_;
        if (!f) continue;
        for (int j = col; j < k; ++j)
          s[size_t(i) * k + j] =
              uint32_t((s[size_t(i) * k + j] + (p_ - f) * s[size_t(col) * k + j]) % p_);
      }
    }
    return det;
  }

  /// Square window on a contiguous 0-based position range [lo, hi].
  Mat window(int lo, int hi) const {
    if (lo < 0 || hi >= m_ || lo > hi) throw std::domain_error("bad window range");
    Mat r(hi - lo + 1, p_);
    for (int i = lo; i <= hi; ++i)
      for (int j = lo; j <= hi; ++j) r.set(i - lo, j - lo, at(i, j));
    return r;
  }

  std::string bytes() const {
    std::string s(a_.size(), '\0');
    for (size_t k = 0; k < a_.size(); ++k) s[k] = char(a_[k]);
    return s;
  }

 private:
  void check(const Mat& o) const {
    if (o.m_ != m_ || o.p_ != p_) throw std::logic_error("matrix shape or modulus mismatch");
  }
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < m_; ++k) std::swap(a_[size_t(i) * m_ + k], a_[size_t(j) * m_ + k]);
  }
  void scale_row(int i, uint32_t f) {
    for (int k = 0; k < m_; ++k)
      a_[size_t(i) * m_ + k] = uint32_t(uint64_t(a_[size_t(i) * m_ + k]) * f % p_);
  }
  void add_row_multiple(int dst, int src, uint32_t f) {
    for (int k = 0; k < m_; ++k)
      a_[size_t(dst) * m_ + k] =
          uint32_t((a_[size_t(dst) * m_ + k] + uint64_t(f) * a_[size_t(src) * m_ + k]) % p_);
  }

  int m_;
  uint32_t p_;
  std::vector<uint32_t> a_;
};

/// Antidiagonal exchange matrix (ones on the antidiagonal).
inline Mat exchange_matrix(int m, uint32_t p) {
  Mat r(m, p);
  for (int i = 0; i < m; ++i) r.set(i, m - 1 - i, 1);
  return r;
}

/// Symplectic structure matrix in 2n x 2n block form (0, I; -I, 0) with I the
/// n x n exchange matrix.
inline Mat symplectic_matrix(int n, uint32_t p) {
  Mat r(2 * n, p);
  for (int i = 0; i < n; ++i) {
    r.set(i, 2 * n - 1 - i, 1);                  // upper right exchange block
    r.set(n + i, n - 1 - i, p - 1);              // lower left negated exchange block
  }
  return r;
}

/// The involutive antiautomorphism the unitary-style groups are carved out by:
/// X -> X^tau for B and D, X -> J^{-1} X^t J for C.  In every case
/// (XY)^dagger = Y^dagger X^dagger and identity^dagger = identity.
inline Mat dagger(const Mat& x, const FormTag& tag) {
  if (x.dim() != tag.m) throw std::logic_error("matrix dimension does not match form tag");
  if (tag.type != GroupType::C) return x.antitranspose();
  Mat j = symplectic_matrix(tag.n, x.modulus());
  return j.inverse() * x.transpose() * j;
}

}  // namespace sylch
