#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sylch/roots.hpp"

namespace sylch {

/// Raised when a computation contradicts a structural theorem the library
/// relies on (canonical-form uniqueness, exact divisibility, ...).
struct theorem_violation : std::runtime_error {
  explicit theorem_violation(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an enumeration would exceed the configured element budget.
struct budget_exceeded : std::runtime_error {
  explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Linear algebra over F_p on fixed-length coordinate vectors.
// ---------------------------------------------------------------------------

/// A subspace of F_p^d kept in reduced row echelon form, so two equal
/// subspaces always hold identical row lists.
class LinearSubspace {
 public:
  LinearSubspace(uint32_t p, int ambient) : p_(p), amb_(ambient) { require_odd_prime(p); }

  uint32_t modulus() const { return p_; }
  int ambient() const { return amb_; }
  int dim() const { return int(rows_.size()); }
  const std::vector<std::vector<uint32_t>>& basis() const { return rows_; }

  /// Adds a vector; returns true when the dimension grows.
  bool insert(std::vector<uint32_t> v) {
    check_len(v);
    reduce_in_place(v);
    int piv = pivot_of(v);
    if (piv < 0) return false;
    uint32_t inv = Fp(v[piv], p_).inv().val();
    for (auto& c : v) c = uint32_t((uint64_t(c) * inv) % p_);
    size_t at = 0;
    while (at < rows_.size() && pivots_[at] < piv) ++at;
    rows_.insert(rows_.begin() + at, v);
    pivots_.insert(pivots_.begin() + at, piv);
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (int(r) == int(at)) continue;
      uint32_t c = rows_[r][piv];
      if (c) subtract_multiple(rows_[r], v, c);
    }
    return true;
  }

  /// Residual of v after reduction against the basis; zero iff v is a member.
  std::vector<uint32_t> reduce(std::vector<uint32_t> v) const {
    check_len(v);
    reduce_in_place(v);
    return v;
  }

  bool contains(const std::vector<uint32_t>& v) const {
    std::vector<uint32_t> r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](uint32_t c) { return c == 0; });
  }

  bool contains_subspace(const LinearSubspace& o) const {
    for (const auto& row : o.rows_)
      if (!contains(row)) return false;
    return true;
  }

  bool operator==(const LinearSubspace& o) const {
    return p_ == o.p_ && amb_ == o.amb_ && rows_ == o.rows_;
  }

  LinearSubspace sum(const LinearSubspace& o) const {
    check_compat(o);
    LinearSubspace out = *this;
    for (const auto& row : o.rows_) out.insert(row);
    return out;
  }

  /// Zassenhaus intersection: echelonize (v|v) for our basis and (w|0) for
  /// the other; rows with zero left half have intersection vectors on the
  /// right.
  LinearSubspace intersect(const LinearSubspace& o) const {
    check_compat(o);
    LinearSubspace big(p_, 2 * amb_);
    for (const auto& v : rows_) {
      std::vector<uint32_t> w(2 * amb_, 0);
      std::copy(v.begin(), v.end(), w.begin());
      std::copy(v.begin(), v.end(), w.begin() + amb_);
      big.insert(w);
    }
    for (const auto& v : o.rows_) {
      std::vector<uint32_t> w(2 * amb_, 0);
      std::copy(v.begin(), v.end(), w.begin());
      big.insert(w);
    }
    LinearSubspace out(p_, amb_);
    for (const auto& row : big.rows_) {
      bool left_zero = std::all_of(row.begin(), row.begin() + amb_,
                                   [](uint32_t c) { return c == 0; });
      if (left_zero) out.insert(std::vector<uint32_t>(row.begin() + amb_, row.end()));
    }
    return out;
  }

  /// All p^dim member vectors in mixed-radix order of the basis coefficients
  /// (first basis vector least significant).
  std::vector<std::vector<uint32_t>> enumerate(uint64_t budget) const {
    uint64_t total = 1;
    for (int i = 0; i < dim(); ++i) {
      total *= p_;
      if (total > budget)
        throw budget_exceeded("subspace enumeration needs " + std::to_string(total) +
                              "+ elements, budget " + std::to_string(budget));
    }
    std::vector<std::vector<uint32_t>> out;
    out.reserve(size_t(total));
    std::vector<uint32_t> coeff(dim(), 0);
    for (uint64_t it = 0; it < total; ++it) {
      std::vector<uint32_t> v(amb_, 0);
      for (int i = 0; i < dim(); ++i)
        if (coeff[i]) subtract_multiple(v, rows_[i], p_ - coeff[i]);
      out.push_back(std::move(v));
      for (int i = 0; i < dim(); ++i) {
        if (++coeff[i] < p_) break;
        coeff[i] = 0;
      }
    }
    return out;
  }

  /// Solution space of the homogeneous system (one constraint row per entry).
  static LinearSubspace nullspace(uint32_t p, int ambient,
                                  const std::vector<std::vector<uint32_t>>& constraints) {
    LinearSubspace row_space(p, ambient);
    for (const auto& c : constraints) row_space.insert(c);
    std::vector<bool> is_pivot(ambient, false);
    for (int piv : row_space.pivots_) is_pivot[piv] = true;
    LinearSubspace out(p, ambient);
    for (int free_col = 0; free_col < ambient; ++free_col) {
      if (is_pivot[free_col]) continue;
      std::vector<uint32_t> v(ambient, 0);
      v[free_col] = 1;
      for (size_t r = 0; r < row_space.rows_.size(); ++r) {
        uint32_t c = row_space.rows_[r][free_col];
        if (c) v[row_space.pivots_[r]] = p - c;
      }
      out.insert(v);
    }
    return out;
  }

 private:
  void check_len(const std::vector<uint32_t>& v) const {
    if (int(v.size()) != amb_) throw std::invalid_argument("vector length mismatch");
  }
  void check_compat(const LinearSubspace& o) const {
    if (p_ != o.p_ || amb_ != o.amb_) throw std::logic_error("subspace ambient mismatch");
  }
  static int pivot_of(const std::vector<uint32_t>& v) {
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i]) return int(i);
    return -1;
  }
  void subtract_multiple(std::vector<uint32_t>& v, const std::vector<uint32_t>& w,
                         uint32_t c) const {
    for (size_t i = 0; i < v.size(); ++i)
      v[i] = uint32_t((v[i] + uint64_t(p_ - c) * w[i]) % p_);
  }
  void reduce_in_place(std::vector<uint32_t>& v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      uint32_t c = v[pivots_[r]];
      if (c) subtract_multiple(v, rows_[r], c);
    }
  }

  uint32_t p_;
  int amb_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<int> pivots_;
};

// ---------------------------------------------------------------------------
// Structure: everything derived from (type, n, p).
// ---------------------------------------------------------------------------

enum class SpringerKind { cayley, logarithm };

class Structure {
 public:
  Structure(FormTag tag, uint32_t p) : tag_(tag), p_(p), rs_(tag) {
    require_odd_prime(p);
    for (int k = 0; k < rs_.size(); ++k) {
      const MirrorInfo& mi = rs_.minfo(k);
      Mat b = Mat::unit(tag_.m, p_, rs_.row_pos(k), rs_.col_pos(k));
      if (!mi.self_paired)
        b = b + Mat::unit(tag_.m, p_, rs_.mirror_row_pos(k), rs_.mirror_col_pos(k))
                    .scaled(Fp(mi.eps, p_));
      basis_.push_back(std::move(b));
      weight_.push_back(mi.self_paired ? 1 : 2);
    }
    cells_.reserve(size_t(tag_.m) * (tag_.m - 1) / 2);
    cell_index_.assign(size_t(tag_.m) * tag_.m, -1);
    for (int r = 0; r < tag_.m; ++r)
      for (int c = r + 1; c < tag_.m; ++c) {
        cell_index_[size_t(r) * tag_.m + c] = int(cells_.size());
        cells_.emplace_back(r, c);
      }
  }

  const FormTag& tag() const { return tag_; }
  uint32_t p() const { return p_; }
  int m() const { return tag_.m; }
  int n() const { return tag_.n; }
  const RootSystem& roots() const { return rs_; }
  int dim() const { return rs_.size(); }
  const Mat& basis_mat(int k) const { return basis_[k]; }
  int weight(int k) const { return weight_[k]; }

  // --- root coordinates and codes -----------------------------------------

  std::vector<uint32_t> coords_of(const Mat& x) const {
    std::vector<uint32_t> c(size_t(dim()), 0);
    for (int k = 0; k < dim(); ++k) c[k] = x.at(rs_.row_pos(k), rs_.col_pos(k));
    return c;
  }

  Mat mat_of(const std::vector<uint32_t>& coords) const {
    if (int(coords.size()) != dim()) throw std::invalid_argument("coordinate length mismatch");
    Mat x(tag_.m, p_);
    for (int k = 0; k < dim(); ++k) {
      if (!coords[k]) continue;
      x.set(rs_.row_pos(k), rs_.col_pos(k), coords[k]);
      if (!rs_.minfo(k).self_paired)
        x.set(rs_.mirror_row_pos(k), rs_.mirror_col_pos(k),
              (Fp(rs_.minfo(k).eps, p_) * Fp(coords[k], p_)).val());
    }
    return x;
  }

  bool in_u(const Mat& x) const {
    return x.is_strictly_upper() && dagger(x, tag_) == -x;
  }

  uint64_t space_size() const {
    uint64_t total = 1;
    for (int k = 0; k < dim(); ++k) {
      if (total > (uint64_t(1) << 62) / p_)
        throw std::overflow_error("p^|roots| exceeds 2^62");
      total *= p_;
    }
    return total;
  }

  uint64_t code_of(const std::vector<uint32_t>& coords) const {
    uint64_t code = 0;
    for (int k = dim() - 1; k >= 0; --k) code = code * p_ + coords[k];
    return code;
  }

  std::vector<uint32_t> coords_of_code(uint64_t code) const {
    std::vector<uint32_t> c(size_t(dim()), 0);
    for (int k = 0; k < dim(); ++k) {
      c[k] = uint32_t(code % p_);
      code /= p_;
    }
    return c;
  }

  // --- Springer maps -------------------------------------------------------

  /// f(u) = 2(u-1)(u+1)^{-1}; lands in the Lie algebra for u in the group.
  Mat cayley(const Mat& u) const {
    Mat one = Mat::identity(tag_.m, p_);
    Mat num = u - one;
    Mat den = (u + one).inverse();
    return (num * den).scaled(Fp(2, p_));
  }

  /// f^{-1}(y) = (2+y)(2-y)^{-1}.
  Mat cayley_inv(const Mat& y) const {
    Mat two = Mat::identity(tag_.m, p_).scaled(Fp(2, p_));
    return (two + y) * (two - y).inverse();
  }

  /// The truncated-series logarithm/exponential pair is available only when
  /// p exceeds the matrix size, so every divisor 1..m-1 is invertible.
  bool log_available() const { return p_ > uint32_t(tag_.m); }

  Mat log_map(const Mat& u) const {
    require_log();
    Mat one = Mat::identity(tag_.m, p_);
    Mat x = u - one;
    Mat acc(tag_.m, p_);
    Mat pw = x;
    for (int k = 1; k < tag_.m; ++k) {
      Fp coef = Fp(k % 2 ? 1 : -1, p_) / Fp(k, p_);
      acc = acc + pw.scaled(coef);
      pw = pw * x;
    }
    return acc;
  }

  Mat exp_map(const Mat& x) const {
    require_log();
    Mat acc = Mat::identity(tag_.m, p_);
    Mat pw = x;
    Fp fact(1, p_);
    for (int k = 1; k < tag_.m; ++k) {
      fact = fact * Fp(k, p_);
      acc = acc + pw.scaled(fact.inv());
      pw = pw * x;
    }
    return acc;
  }

  Mat springer(const Mat& u, SpringerKind kind) const {
    return kind == SpringerKind::cayley ? cayley(u) : log_map(u);
  }
  Mat springer_inv(const Mat& x, SpringerKind kind) const {
    return kind == SpringerKind::cayley ? cayley_inv(x) : exp_map(x);
  }

  // --- block geometry -------------------------------------------------------

  bool is_B() const { return tag_.type == GroupType::B; }

  /// Middle one-parameter nilpotent of type B (the 𝔰 direction).
  Mat s_direction() const {
    require_B();
    int k = rs_.index_of(Root{tag_.n, 0});
    return basis_[k];
  }

  /// Type B: diag(E, (1, c, -c²/2; 0, 1, -c; 0, 0, 1), E) in (n-1,3,n-1) blocks.
  Mat expc(Fp c) const {
    require_B();
    Mat g = Mat::identity(tag_.m, p_);
    int a = tag_.n - 1;
    g.set(a, a + 1, c.val());
    g.set(a + 1, a + 2, (-c).val());
    g.set(a, a + 2, (-(c * c) * inv2(p_)).val());
    return g;
  }

  // --- subgroup membership predicates --------------------------------------

  bool in_U(const Mat& g) const {
    return g.is_upper_unitriangular() && dagger(g, tag_) * g == Mat::identity(tag_.m, p_);
  }

  bool in_U0(const Mat& g) const {
    if (!in_U(g)) return false;
    int h = tag_.n;
    // off-diagonal blocks vanish
    for (int r = 0; r < h; ++r)
      for (int c = h; c < tag_.m; ++c)
        if (g.at(r, c) != 0) return false;
    if (is_B())
      for (int c = h + 1; c < tag_.m; ++c)
        if (g.at(h, c) != 0) return false;
    return true;
  }

  bool in_U1(const Mat& g) const {
    if (!in_U(g)) return false;
    int h = tag_.n;
    // diagonal blocks are identities
    for (int r = 0; r < h; ++r)
      for (int c = r + 1; c < h; ++c)
        if (g.at(r, c) != 0) return false;
    int lo = is_B() ? h + 1 : h;
    for (int r = lo; r < tag_.m; ++r)
      for (int c = r + 1; c < tag_.m; ++c)
        if (g.at(r, c) != 0) return false;
    return true;
  }

  bool in_G_script(const Mat& g) const {
    if (!g.is_upper_unitriangular()) return false;
    switch (tag_.type) {
      case GroupType::C:
        return true;
      case GroupType::B: {
        int a = tag_.n - 1;
        Fp c = g.entry(a, a + 1);
        return g.entry(a + 1, a + 2) == -c &&
               g.entry(a, a + 2) == -(c * c) * inv2(p_);
      }
      case GroupType::D:
        return wd_ok(g);
    }
    return false;
  }

  bool in_H_script(const Mat& g) const {
    if (!in_G_script(g)) return false;
    int lo = is_B() ? tag_.n + 2 : tag_.n;
    for (int r = lo; r < tag_.m; ++r)
      for (int c = r + 1; c < tag_.m; ++c)
        if (g.at(r, c) != 0) return false;
    if (is_B()) {
      // last row of the middle-to-right block vanishes
      for (int c = tag_.n + 2; c < tag_.m; ++c)
        if (g.at(tag_.n + 1, c) != 0) return false;
    }
    return true;
  }

  bool in_S(const Mat& g) const {
    require_B();
    if (!g.is_upper_unitriangular()) return false;
    int a = tag_.n - 1;
    for (int r = 0; r < tag_.m; ++r)
      for (int c = r + 1; c < tag_.m; ++c) {
        bool middle = r >= a && r <= a + 2 && c >= a && c <= a + 2;
        if (!middle && g.at(r, c) != 0) return false;
      }
    return g == expc(g.entry(a, a + 1));
  }

  bool in_G_diamond(const Mat& g) const {
    if (!g.is_upper_unitriangular()) return false;
    if (!is_B()) return in_G_script(g);
    int a = tag_.n - 1;
    return in_G_script(g) && g.at(a, a + 1) == 0 && g.at(a, a + 2) == 0 &&
           g.at(a + 1, a + 2) == 0;
  }

  bool in_H_diamond(const Mat& g) const { return in_G_diamond(g) && in_H_script(g); }

  // --- semidirect factorizations -------------------------------------------

  /// u = u_1 u_0 with u_1 in U_1 and u_0 in U_0; throws if u is not in U or
  /// the factors fail their shape checks.
  std::pair<Mat, Mat> split_u1_u0(const Mat& u) const {
    if (!in_U(u)) throw std::domain_error("split of a matrix outside the group");
    int h = tag_.n;
    Mat A = u.window(0, h - 1);
    Mat u0 = Mat::identity(tag_.m, p_);
    Mat Ati = tau_block(A).inverse_unitriangular();
    int lo = is_B() ? h + 1 : h;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) {
        u0.set(r, c, A.at(r, c));
        u0.set(lo + r, lo + c, Ati.at(r, c));
      }
    Mat u1 = u * u0.inverse_unitriangular();
    if (!in_U1(u1) || !in_U0(u0) || !(u1 * u0 == u))
      throw theorem_violation("semidirect factorization failed");
    return {u1, u0};
  }

  /// x = x_0 + x_1 (diagonal-block part plus ideal part).
  std::pair<Mat, Mat> split_lie(const Mat& x) const {
    if (!in_u(x)) throw std::domain_error("split of a matrix outside the algebra");
    int h = tag_.n;
    Mat x0(tag_.m, p_);
    int lo = is_B() ? h + 1 : h;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) {
        x0.set(r, c, x.at(r, c));
        x0.set(lo + r, lo + c, x.at(lo + r, lo + c));
      }
    return {x0, x - x0};
  }

  // --- type-B block maps ----------------------------------------------------

  /// M(v1, v2) = (E, v1, -½v1v2^τ; 0, 1, -v2^τ; 0, 0, E) in (n,1,n) blocks.
  Mat Mvv(const std::vector<uint32_t>& v1, const std::vector<uint32_t>& v2) const {
    require_B();
    int h = tag_.n;
    if (int(v1.size()) != h || int(v2.size()) != h)
      throw std::invalid_argument("column length mismatch");
    Mat g = Mat::identity(tag_.m, p_);
    Fp half = inv2(p_);
    for (int r = 0; r < h; ++r) g.set(r, h, v1[r]);
    for (int c = 0; c < h; ++c) g.set(h, h + 1 + c, (-Fp(v2[h - 1 - c], p_)).val());
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c)
        g.set(r, h + 1 + c, (-half * Fp(v1[r], p_) * Fp(v2[h - 1 - c], p_)).val());
    return g;
  }

  /// F(B) = (E, 0, B; 0, 1, 0; 0, 0, E); needs B^τ = -B for group membership.
  Mat Fblock(const Mat& B) const {
    require_B();
    int h = tag_.n;
    if (B.dim() != h) throw std::invalid_argument("block size mismatch");
    Mat g = Mat::identity(tag_.m, p_);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) g.set(r, h + 1 + c, B.at(r, c));
    return g;
  }

  // --- generator lists -------------------------------------------------------

  std::vector<Mat> gens_U(SpringerKind kind = SpringerKind::cayley) const {
    std::vector<Mat> out;
    for (int k = 0; k < dim(); ++k)
      for (uint32_t t = 1; t < p_; ++t)
        out.push_back(springer_inv(basis_[k].scaled(Fp(t, p_)), kind));
    return out;
  }

  std::vector<Mat> gens_U0() const {
    std::vector<Mat> out;
    int h = tag_.n;
    int lo = is_B() ? h + 1 : h;
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j)
        for (uint32_t t = 1; t < p_; ++t) {
          Mat g = Mat::identity(tag_.m, p_);
          g.set(i, j, t);
          // mirrored inverse block keeps g in the group
          g.set(lo + (h - 1 - j), lo + (h - 1 - i), (-Fp(t, p_)).val());
          out.push_back(g);
        }
    return out;
  }

  std::vector<Mat> gens_U1() const {
    std::vector<Mat> out;
    int h = tag_.n;
    if (is_B()) {
      for (int k = 0; k < h; ++k)
        for (uint32_t t = 1; t < p_; ++t) {
          std::vector<uint32_t> v(size_t(h), 0);
          v[size_t(k)] = t;
          out.push_back(Mvv(v, v));
        }
      for (const Mat& B : tau_antisymmetric_basis())
        for (uint32_t t = 1; t < p_; ++t) out.push_back(Fblock(B.scaled(Fp(t, p_))));
    } else {
      auto blocks = tag_.type == GroupType::C ? tau_symmetric_basis() : tau_antisymmetric_basis();
      for (const Mat& B : blocks)
        for (uint32_t t = 1; t < p_; ++t) {
          Mat g = Mat::identity(tag_.m, p_);
          for (int r = 0; r < h; ++r)
            for (int c = 0; c < h; ++c)
              g.set(r, h + c, (Fp(B.at(r, c), p_) * Fp(t, p_)).val());
          out.push_back(g);
        }
    }
    return out;
  }

  /// Generated by U together with independent unitriangular blocks on the
  /// two diagonal corners.  The filtration generators of the block-shaped
  /// algebra group (plus, for B, the exponential middle block) are appended:
  /// they lie in the generated group and make the list provably generate the
  /// whole block-shaped subgroup for every n.
  std::vector<Mat> gens_G_script(SpringerKind kind = SpringerKind::cayley) const {
    std::vector<Mat> out = gens_U(kind);
    int h = tag_.n;
    int lo = is_B() ? h + 1 : h;
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j)
        for (uint32_t t = 1; t < p_; ++t) {
          Mat g = Mat::identity(tag_.m, p_);
          g.set(i, j, t);
          out.push_back(g);
          Mat g2 = Mat::identity(tag_.m, p_);
          g2.set(lo + i, lo + j, t);
          out.push_back(g2);
        }
    for (Mat& g : algebra_group_generators(g_diamond_basis())) out.push_back(std::move(g));
    if (is_B())
      for (uint32_t t = 1; t < p_; ++t) out.push_back(expc(Fp(t, p_)));
    return out;
  }

  /// Generated by U_1 together with unitriangular blocks on the first corner.
  /// Filtration generators of the associated block shape are appended for the
  /// same completeness reason as in gens_G_script.
  std::vector<Mat> gens_H_script() const {
    std::vector<Mat> out = gens_U1();
    int h = tag_.n;
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j)
        for (uint32_t t = 1; t < p_; ++t) {
          Mat g = Mat::identity(tag_.m, p_);
          g.set(i, j, t);
          out.push_back(g);
        }
    for (Mat& g : algebra_group_generators(h_diamond_basis())) out.push_back(std::move(g));
    return out;
  }

  // --- cell space (all strictly upper positions) -----------------------------

  int cell_count() const { return int(cells_.size()); }
  std::pair<int, int> cell_at(int idx) const { return cells_[size_t(idx)]; }
  int cell_index(int r, int c) const {
    int idx = cell_index_[size_t(r) * tag_.m + c];
    if (idx < 0) throw std::invalid_argument("not a strictly upper cell");
    return idx;
  }

  std::vector<uint32_t> cellvec_of(const Mat& x) const {
    if (!x.is_strictly_upper()) throw std::domain_error("cell vector of a non-strict matrix");
    std::vector<uint32_t> v(cells_.size());
    for (size_t i = 0; i < cells_.size(); ++i) v[i] = x.at(cells_[i].first, cells_[i].second);
    return v;
  }

  Mat mat_of_cellvec(const std::vector<uint32_t>& v) const {
    if (v.size() != cells_.size()) throw std::invalid_argument("cell vector length mismatch");
    Mat x(tag_.m, p_);
    for (size_t i = 0; i < cells_.size(); ++i)
      if (v[i]) x.set(cells_[i].first, cells_[i].second, v[i]);
    return x;
  }

  LinearSubspace cell_span(const std::vector<Mat>& mats) const {
    LinearSubspace s(p_, cell_count());
    for (const Mat& x : mats) s.insert(cellvec_of(x));
    return s;
  }

  /// The Lie algebra of the big auxiliary group: for C all strictly upper
  /// cells; for D the block-upper shape with the tied corner; for B all cells
  /// outside the middle 3x3 block.
  std::vector<Mat> g_diamond_basis() const {
    std::vector<Mat> out;
    switch (tag_.type) {
      case GroupType::C: {
        for (auto [r, c] : cells_) out.push_back(Mat::unit(tag_.m, p_, r, c));
        break;
      }
      case GroupType::B: {
        int a = tag_.n - 1;
        for (auto [r, c] : cells_) {
          bool middle = r >= a && r <= a + 2 && c >= a && c <= a + 2;
          if (!middle) out.push_back(Mat::unit(tag_.m, p_, r, c));
        }
        break;
      }
      case GroupType::D: {
        int h = tag_.n;
        for (auto [r, c] : cells_) {
          bool corner = (r == h - 1 && c == h) || (r == h - 1 && c == h + 1) ||
                        (r == h - 2 && c == h);
          if (!corner) out.push_back(Mat::unit(tag_.m, p_, r, c));
        }
        if (h >= 2)
          out.push_back(Mat::unit(tag_.m, p_, h - 2, h) -
                        Mat::unit(tag_.m, p_, h - 1, h + 1));
        break;
      }
    }
    return out;
  }

  /// Lie algebra of the smaller auxiliary group (zero lower-right corner; for
  /// B additionally only the top two rows of the middle-to-right block).
  std::vector<Mat> h_diamond_basis() const {
    std::vector<Mat> out;
    int h = tag_.n;
    if (is_B()) {
      for (auto [r, c] : cells_) {
        bool a0 = r < h - 1 && c < h - 1;
        bool a1 = r < h - 1 && c >= h - 1 && c <= h + 1;
        bool a2 = r < h - 1 && c >= h + 2;
        bool a4 = (r == h - 1 || r == h) && c >= h + 2;
        if (a0 || a1 || a2 || a4) out.push_back(Mat::unit(tag_.m, p_, r, c));
      }
    } else {
      for (auto [r, c] : cells_) {
        if (r < h && c < h) out.push_back(Mat::unit(tag_.m, p_, r, c));
      }
      if (tag_.type == GroupType::C) {
        for (int r = 0; r < h; ++r)
          for (int c = h; c < tag_.m; ++c) out.push_back(Mat::unit(tag_.m, p_, r, c));
      } else {
        for (int r = 0; r < h; ++r)
          for (int c = h; c < tag_.m; ++c) {
            bool corner = (r == h - 1 && c == h) || (r == h - 1 && c == h + 1) ||
                          (r == h - 2 && c == h);
            if (!corner) out.push_back(Mat::unit(tag_.m, p_, r, c));
          }
        if (h >= 2)
          out.push_back(Mat::unit(tag_.m, p_, h - 2, h) -
                        Mat::unit(tag_.m, p_, h - 1, h + 1));
      }
    }
    return out;
  }

  // --- actions ----------------------------------------------------------------

  /// The two-sided twisted action x -> g x g† (preserves 𝔲 for unitriangular g).
  Mat act_lie(const Mat& g, const Mat& x) const { return g * x * dagger(g, tag_); }

  Mat adjoint(const Mat& u, const Mat& x) const { return u * x * u.inverse_unitriangular(); }

  /// Left action of a in U_0 realized as a_1 x a_1†, a_1 = diag(A, [1], E).
  Mat left_action(const Mat& a, const Mat& x) const {
    Mat a1 = corner_embed(a, true);
    return act_lie(a1, x);
  }

  /// Right action realized as a_2 x a_2†, a_2 = diag(E, [1], A^τ).
  Mat right_action(const Mat& a, const Mat& x) const {
    Mat a2 = corner_embed(a, false);
    return act_lie(a2, x);
  }

  // --- dual space ---------------------------------------------------------------

  /// Pairing of a coefficient vector with root coordinates:
  /// λ(x) = Σ_α c_α·w_α·x_α with w_α = 2 for mirror pairs and 1 for self-paired.
  Fp pair_f(const std::vector<uint32_t>& lam, const std::vector<uint32_t>& xc) const {
    uint64_t acc = 0;
    for (int k = 0; k < dim(); ++k)
      acc += uint64_t(weight_[k]) * lam[size_t(k)] % p_ * xc[size_t(k)] % p_;
    return Fp(int64_t(acc % p_), p_);
  }

  /// Matrix of cell coefficients representing λ on all of Mat(m): value φ at
  /// each support cell and ε(α)φ at its mirror.
  Mat unfold(const std::vector<uint32_t>& lam) const {
    Mat L(tag_.m, p_);
    for (int k = 0; k < dim(); ++k) {
      if (!lam[size_t(k)]) continue;
      L.set(rs_.row_pos(k), rs_.col_pos(k), lam[size_t(k)]);
      if (!rs_.minfo(k).self_paired)
        L.set(rs_.mirror_row_pos(k), rs_.mirror_col_pos(k),
              (Fp(rs_.minfo(k).eps, p_) * Fp(lam[size_t(k)], p_)).val());
    }
    return L;
  }

  /// Canonical coefficients of the functional x -> Σ L_cell·x_cell on 𝔲.
  std::vector<uint32_t> fold(const Mat& L) const {
    std::vector<uint32_t> lam(size_t(dim()), 0);
    Fp half = inv2(p_);
    for (int k = 0; k < dim(); ++k) {
      Fp a = L.entry(rs_.row_pos(k), rs_.col_pos(k));
      if (rs_.minfo(k).self_paired) {
        lam[size_t(k)] = a.val();
      } else {
        Fp b = L.entry(rs_.mirror_row_pos(k), rs_.mirror_col_pos(k));
        lam[size_t(k)] = (half * (a + Fp(rs_.minfo(k).eps, p_) * b)).val();
      }
    }
    return lam;
  }

  /// (g★λ)(x) = λ(gxg†), computed by pushing the unfolded cell functional
  /// through the transposed maps and folding back.
  std::vector<uint32_t> dual_act(const Mat& g, const std::vector<uint32_t>& lam) const {
    Mat L = unfold(lam);
    Mat pushed = g.transpose() * L * dagger(g, tag_).transpose();
    return fold(pushed);
  }

  // --- associative closures -------------------------------------------------------

  /// Smallest associative subalgebra (as a cell-space span) containing the seed.
  LinearSubspace associative_closure(const std::vector<Mat>& seed) const {
    LinearSubspace span = cell_span(seed);
    bool grew = true;
    while (grew) {
      grew = false;
      auto rows = span.basis();
      std::vector<Mat> mats;
      mats.reserve(rows.size());
      for (const auto& r : rows) mats.push_back(mat_of_cellvec(r));
      for (const Mat& a : mats)
        for (const Mat& b : mats) {
          Mat ab = a * b;
          if (!ab.is_zero() && span.insert(cellvec_of(ab))) grew = true;
        }
    }
    return span;
  }

  /// Generators of the algebra group 1 + J: one-parameter elements along a
  /// basis of every power J^k. Writing an element of J^k in the level-k basis
  /// and multiplying the matching generators only leaves an error in J^{k+1},
  /// so downward induction over the filtration gives the whole group.
  std::vector<Mat> algebra_group_generators(const std::vector<Mat>& j_basis) const {
    std::vector<Mat> vecs;
    std::vector<Mat> level = j_basis;
    while (!level.empty()) {
      LinearSubspace level_span(p_, cell_count());
      std::vector<Mat> level_basis;
      for (const Mat& v : level)
        if (!v.is_zero() && level_span.insert(cellvec_of(v))) level_basis.push_back(v);
      for (const Mat& v : level_basis) vecs.push_back(v);
      std::vector<Mat> next;
      for (const Mat& a : level_basis)
        for (const Mat& b : j_basis) {
          Mat ab = a * b;
          if (!ab.is_zero()) next.push_back(ab);
        }
      level = std::move(next);
    }
    std::vector<Mat> gens;
    Mat one = Mat::identity(tag_.m, p_);
    for (const Mat& v : vecs)
      for (uint32_t t = 1; t < p_; ++t) gens.push_back(one + v.scaled(Fp(t, p_)));
    return gens;
  }

 private:
  void require_B() const {
    if (!is_B()) throw std::domain_error("operation is specific to type B");
  }
  void require_log() const {
    if (!log_available())
      throw std::domain_error("logarithm variant requires p > matrix size");
  }

  bool wd_ok(const Mat& g) const {
    int h = tag_.n;
    if (g.at(h - 1, h) != 0) return false;
    if (h < 2) return true;
    return g.entry(h - 1, h + 1) == -g.entry(h - 2, h);
  }

  // antitranspose of an n x n corner block
  Mat tau_block(const Mat& A) const {
    int h = A.dim();
    Mat out(h, p_);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) out.set(h - 1 - c, h - 1 - r, A.at(r, c));
    return out;
  }

  Mat corner_embed(const Mat& a, bool left) const {
    if (!in_U0(a)) throw std::domain_error("left/right action needs an element of U_0");
    int h = tag_.n;
    int lo = is_B() ? h + 1 : h;
    Mat g = Mat::identity(tag_.m, p_);
    if (left) {
      for (int r = 0; r < h; ++r)
        for (int c = r + 1; c < h; ++c) g.set(r, c, a.at(r, c));
    } else {
      Mat A = a.window(0, h - 1);
      Mat At = tau_block(A);
      for (int r = 0; r < h; ++r)
        for (int c = r + 1; c < h; ++c) g.set(lo + r, lo + c, At.at(r, c));
    }
    return g;
  }

  std::vector<Mat> tau_symmetric_basis() const {
    int h = tag_.n;
    std::vector<Mat> out;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) {
        int tr = h - 1 - c, tc = h - 1 - r;
        if (std::make_pair(tr, tc) < std::make_pair(r, c)) continue;
        Mat B(h, p_);
        B.set(r, c, 1);
        if (tr != r || tc != c) B.set(tr, tc, 1);
        out.push_back(B);
      }
    return out;
  }

  std::vector<Mat> tau_antisymmetric_basis() const {
    int h = tag_.n;
    std::vector<Mat> out;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < h; ++c) {
        int tr = h - 1 - c, tc = h - 1 - r;
        if (std::make_pair(tr, tc) <= std::make_pair(r, c)) continue;
        Mat B(h, p_);
        B.set(r, c, 1);
        B.set(tr, tc, (p_ - 1));
        out.push_back(B);
      }
    return out;
  }

  FormTag tag_;
  uint32_t p_;
  RootSystem rs_;
  std::vector<Mat> basis_;
  std::vector<int> weight_;
  std::vector<std::pair<int, int>> cells_;
  std::vector<int> cell_index_;
};

// ---------------------------------------------------------------------------
// Group closure utilities.
// ---------------------------------------------------------------------------

/// Breadth-first closure of {1} under right multiplication by the generators.
/// Deterministic order; throws when the closure would exceed the budget.
inline std::vector<Mat> group_closure(const std::vector<Mat>& gens, int m, uint32_t p,
                                      uint64_t budget = 5'000'000) {
  std::set<std::string> seen;
  std::vector<Mat> out;
  std::queue<Mat> work;
  Mat one = Mat::identity(m, p);
  seen.insert(one.bytes());
  out.push_back(one);
  work.push(one);
  while (!work.empty()) {
    Mat g = work.front();
    work.pop();
    for (const Mat& h : gens) {
      Mat gh = g * h;
      if (seen.insert(gh.bytes()).second) {
        if (out.size() >= budget)
          throw budget_exceeded("group closure exceeds budget " + std::to_string(budget));
        out.push_back(gh);
        work.push(gh);
      }
    }
  }
  return out;
}

}  // namespace sylch
