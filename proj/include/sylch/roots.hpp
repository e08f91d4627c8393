#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sylch/matrix.hpp"

namespace sylch {

// Row and column indices are labelled 1, ..., n, 0, -n, ..., -1 and ordered
// 1 < 2 < ... < n < 0 < -n < ... < -1.  Label 0 exists only in type B.

inline bool label_valid(const FormTag& tag, int label) {
  if (label == 0) return tag.type == GroupType::B;
  return label >= -tag.n && label <= tag.n;
}

/// 0-based matrix position of a label.
inline int position_of(const FormTag& tag, int label) {
  if (!label_valid(tag, label)) throw std::invalid_argument("label out of range for form");
  if (label > 0) return label - 1;
  if (label == 0) return tag.n;
  return tag.m + label;  // -j sits at position m - j (1-based), so m + label 0-based
}

inline int label_of(const FormTag& tag, int pos) {
  if (pos < 0 || pos >= tag.m) throw std::invalid_argument("position out of range");
  if (pos < tag.n) return pos + 1;
  if (tag.type == GroupType::B && pos == tag.n) return 0;
  return pos - tag.m;
}

/// precedes(a, b) in the total order above.
inline bool label_precedes(const FormTag& tag, int a, int b) {
  return position_of(tag, a) < position_of(tag, b);
}

struct Root {
  int i;  // row label
  int j;  // column label
  bool operator==(const Root& o) const { return i == o.i && j == o.j; }
  bool operator<(const Root& o) const { return i != o.i ? i < o.i : j < o.j; }
};

inline Root mirror(const Root& a) { return Root{-a.j, -a.i}; }

/// Positive roots of the restricted root system, one per free coordinate of
/// the Lie algebra u:
///   B: (i,j) with 1 <= i <= n, i < j < -i
///   C: (i,j) with 1 <= i <= n, i < j <= -i
///   D: (i,j) with 1 <= i <= n, i < j < -i, j != 0 (no label 0 exists)
inline std::vector<Root> positive_roots(const FormTag& tag) {
  std::vector<Root> out;
  for (int i = 1; i <= tag.n; ++i) {
    int lo = position_of(tag, i) + 1;
    int hi = position_of(tag, -i) - (tag.type == GroupType::C ? 0 : 1);
    for (int pos = lo; pos <= hi; ++pos) out.push_back(Root{i, label_of(tag, pos)});
  }
  return out;
}

/// Mirror data of one positive root: the reflected cell, whether the root is
/// its own mirror (type C, j = -i), and the sign making E_a + eps E_a' live in
/// u.  The sign is computed from the dagger equation, not tabulated.
struct MirrorInfo {
  Root prime;
  bool self_paired;
  int eps;  // +1 or -1; meaningful only when !self_paired
};

inline MirrorInfo mirror_info(const FormTag& tag, const Root& a) {
  Root pr = mirror(a);
  // Probe modulus: the sign of dagger on a matrix unit is +-1 independent of p.
  const uint32_t probe = 3;
  Mat e = Mat::unit(tag.m, probe, position_of(tag, a.i), position_of(tag, a.j));
  Mat d = dagger(e, tag);
  int found = 0, sign = 0;
  for (int r = 0; r < tag.m; ++r)
    for (int c = 0; c < tag.m; ++c)
      if (d.at(r, c) != 0) {
        ++found;
        if (r != position_of(tag, pr.i) || c != position_of(tag, pr.j))
          throw std::logic_error("dagger image of a matrix unit is not the mirrored cell");
        sign = d.at(r, c) == 1 ? 1 : -1;
      }
  if (found != 1) throw std::logic_error("dagger image of a matrix unit is not a single cell");
  bool self = pr == a;
  // x in u needs x_{a'} = -sign * x_a, i.e. eps = -sign.
  return MirrorInfo{pr, self, -sign};
}

inline Fp sign_eps(const FormTag& tag, const Root& a, uint32_t p) {
  MirrorInfo mi = mirror_info(tag, a);
  if (mi.self_paired) throw std::domain_error("self-paired root has no mirror sign");
  return Fp(mi.eps, p);
}

/// Positive roots with all derived per-root data, in the deterministic
/// (row, column position) order.
class RootSystem {
 public:
  explicit RootSystem(const FormTag& tag) : tag_(tag), roots_(positive_roots(tag)) {
    for (size_t k = 0; k < roots_.size(); ++k) {
      const Root& a = roots_[k];
      MirrorInfo mi = mirror_info(tag, a);
      info_.push_back(mi);
      row_pos_.push_back(position_of(tag, a.i));
      col_pos_.push_back(position_of(tag, a.j));
      mrow_pos_.push_back(position_of(tag, mi.prime.i));
      mcol_pos_.push_back(position_of(tag, mi.prime.j));
      index_[{a.i, a.j}] = int(k);
    }
  }

  const FormTag& tag() const { return tag_; }
  int size() const { return int(roots_.size()); }
  const std::vector<Root>& roots() const { return roots_; }
  const Root& root(int k) const { return roots_[k]; }
  const MirrorInfo& minfo(int k) const { return info_[k]; }
  int row_pos(int k) const { return row_pos_[k]; }
  int col_pos(int k) const { return col_pos_[k]; }
  int mirror_row_pos(int k) const { return mrow_pos_[k]; }
  int mirror_col_pos(int k) const { return mcol_pos_[k]; }

  int index_of(const Root& a) const {
    auto it = index_.find({a.i, a.j});
    return it == index_.end() ? -1 : it->second;
  }

 private:
  FormTag tag_;
  std::vector<Root> roots_;
  std::vector<MirrorInfo> info_;
  std::vector<int> row_pos_, col_pos_, mrow_pos_, mcol_pos_;
  std::map<std::pair<int, int>, int> index_;
};

/// ---------------------------------------------------------------------------
/// Canonical ("quasibasic") supports.
///
/// Each orbit of the twisted conjugation action on u contains exactly one
/// element whose support is one of the subsets accepted below, with free
/// nonzero values.  The rule is checked against exhaustive orbit enumeration
/// in the test suite for every type at n <= 3 (p in {3,5}) and for types C, D
/// at n = 4 (p = 3).
///
/// A root a = (i,j) occupies a matrix cell (its root cell) and the mirrored
/// cell (-j,-i), which coincide exactly for the self-paired roots (i,-i) of
/// type C.  Roots (i,n) and (i,-n) of one row form a single *unit* in types B
/// and D; every other root is a unit by itself.  A subset is *rook* when the
/// occupied matrix rows of distinct units are pairwise disjoint and likewise
/// the occupied columns.  Beyond the rook subsets there are exceptional
/// *chained* families: a short core crossing the outer columns, which may be
/// extended by any rook subset that is cell-disjoint from the core.
struct CellFootprint {
  std::vector<int> rows, cols;  // sorted, per-unit-union not required
};

/// Occupied rows/columns of one root (root cell plus mirror cell).
inline CellFootprint root_footprint(const RootSystem& rs, int k) {
  CellFootprint f;
  f.rows = {rs.row_pos(k)};
  f.cols = {rs.col_pos(k)};
  if (!rs.minfo(k).self_paired) {
    f.rows.push_back(rs.mirror_row_pos(k));
    f.cols.push_back(rs.mirror_col_pos(k));
  }
  std::sort(f.rows.begin(), f.rows.end());
  std::sort(f.cols.begin(), f.cols.end());
  return f;
}

namespace detail_census {

/// Group root indices into units: {(i,n),(i,-n)} merge in types B and D.
inline std::vector<std::vector<int>> units_of(const RootSystem& rs,
                                              const std::vector<int>& subset) {
  const FormTag& tag = rs.tag();
  std::vector<std::vector<int>> units;
  std::vector<char> used(subset.size(), 0);
  for (size_t a = 0; a < subset.size(); ++a) {
    if (used[a]) continue;
    used[a] = 1;
    std::vector<int> unit{subset[a]};
    const Root& ra = rs.root(subset[a]);
    if (tag.type != GroupType::C && (ra.j == tag.n || ra.j == -tag.n)) {
      for (size_t b = a + 1; b < subset.size(); ++b) {
        const Root& rb = rs.root(subset[b]);
        if (!used[b] && rb.i == ra.i && rb.j == -ra.j) {
          used[b] = 1;
          unit.push_back(subset[b]);
        }
      }
    }
    units.push_back(std::move(unit));
  }
  return units;
}

/// True when the units of `subset` occupy pairwise disjoint rows and columns.
/// Rows (and columns) already claimed in `rows`/`cols` count as occupied; on
/// success the subset's footprint is added to them.
inline bool rook_extends(const RootSystem& rs, const std::vector<int>& subset,
                         std::vector<char>& rows, std::vector<char>& cols) {
  auto units = units_of(rs, subset);
  std::vector<int> touched_r, touched_c;
  auto undo = [&]() {
    for (int r : touched_r) rows[size_t(r)] = 0;
    for (int c : touched_c) cols[size_t(c)] = 0;
  };
  for (const auto& unit : units) {
    std::vector<char> ur(rows.size(), 0), uc(cols.size(), 0);
    for (int k : unit) {
      CellFootprint f = root_footprint(rs, k);
      for (int r : f.rows) ur[size_t(r)] = 1;
      for (int c : f.cols) uc[size_t(c)] = 1;
    }
    for (size_t r = 0; r < ur.size(); ++r)
      if (ur[r]) {
        if (rows[r]) { undo(); return false; }
        rows[r] = 1;
        touched_r.push_back(int(r));
      }
    for (size_t c = 0; c < uc.size(); ++c)
      if (uc[c]) {
        if (cols[c]) { undo(); return false; }
        cols[c] = 1;
        touched_c.push_back(int(c));
      }
  }
  return true;
}

/// Exceptional chained cores, as root lists.  k and i index rows with
/// 1 <= k < i < n.  The element side and the functional side need different
/// families: on the element side the {(i,n),(i,-n)} pair sits on the lower
/// row of the chain, on the functional side it sits on the upper row.
/// Verified exhaustively against the orbit partitions at n <= 3 (both sides)
/// and n = 4 (element side); no further families appear there.
inline std::vector<std::vector<Root>> chained_cores(const FormTag& tag, bool dual) {
  std::vector<std::vector<Root>> cores;
  int n = tag.n;
  for (int k = 1; k < n; ++k)
    for (int i = k + 1; i < n; ++i) {
      if (tag.type == GroupType::B && !dual) {
        cores.push_back({Root{k, 0}, Root{k, -n}, Root{i, n}});
        cores.push_back({Root{k, n}, Root{i, n}, Root{i, -n}});
        cores.push_back({Root{k, n}, Root{k, 0}, Root{i, n}, Root{i, -n}});
      }
      if (tag.type == GroupType::B && dual) {
        cores.push_back({Root{k, n}, Root{k, -n}, Root{i, n}});
        cores.push_back({Root{k, 0}, Root{k, -n}, Root{i, 0}});
        cores.push_back({Root{k, n}, Root{k, 0}, Root{k, -n}, Root{i, 0}});
      }
      if (tag.type == GroupType::D && !dual) {
        cores.push_back({Root{k, n}, Root{i, n}, Root{i, -n}});
        if (i == k + 1 && i + 1 < n) {
          // crossed pair through the outer column, first seen at n = 4
          cores.push_back({Root{k, i + 1}, Root{k, -n}, Root{i, n}});
          cores.push_back({Root{k, n}, Root{k, -(i + 1)}, Root{i, i + 1}});
        }
      }
      if (tag.type == GroupType::D && dual) {
        cores.push_back({Root{k, n}, Root{k, -n}, Root{i, n}});
        if (i == k + 1 && i + 1 < n) {
          cores.push_back({Root{k, i + 1}, Root{k, -n}, Root{i, n}});
          cores.push_back({Root{k, n}, Root{k, -(i + 1)}, Root{i, i + 1}});
        }
      }
    }
  return cores;
}

}  // namespace detail_census

/// Corrected canonical-support test (see block comment above).  `dual`
/// selects the functional-side family list; the plain cell-rook rule is the
/// same on both sides.
inline bool is_quasibasic(const RootSystem& rs, const std::vector<int>& subset,
                          bool dual = false) {
  const FormTag& tag = rs.tag();
  size_t m = size_t(tag.m);
  {
    std::vector<char> rows(m, 0), cols(m, 0);
    if (detail_census::rook_extends(rs, subset, rows, cols)) return true;
  }
  // Exceptional families: one chained core plus a cell-disjoint rook rest.
  for (const auto& core : detail_census::chained_cores(tag, dual)) {
    std::vector<int> core_idx;
    for (const Root& a : core) {
      int k = rs.index_of(a);
      if (k < 0) break;
      core_idx.push_back(k);
    }
    if (core_idx.size() != core.size()) continue;
    std::vector<int> rest = subset;
    bool contains = true;
    for (int k : core_idx) {
      auto it = std::find(rest.begin(), rest.end(), k);
      if (it == rest.end()) { contains = false; break; }
      rest.erase(it);
    }
    if (!contains) continue;
    // Claim the core's full footprint, then require the rest to be rook and
    // disjoint from it.
    std::vector<char> rows(m, 0), cols(m, 0);
    for (int k : core_idx) {
      CellFootprint f = root_footprint(rs, k);
      for (int r : f.rows) rows[size_t(r)] = 1;
      for (int c : f.cols) cols[size_t(c)] = 1;
    }
    if (detail_census::rook_extends(rs, rest, rows, cols)) return true;
  }
  return false;
}

/// All quasibasic subsets as sorted root-index lists, enumerated in mask
/// counting order (root 0 is the lowest bit).
inline std::vector<std::vector<int>> enumerate_quasibasic(const RootSystem& rs,
                                                          bool dual = false) {
  int r = rs.size();
  if (r >= 30) throw std::domain_error("root system too large to enumerate subsets");
  std::vector<std::vector<int>> out;
  for (uint32_t mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> subset;
    for (int k = 0; k < r; ++k)
      if (mask & (1u << k)) subset.push_back(k);
    if (is_quasibasic(rs, subset, dual)) out.push_back(std::move(subset));
  }
  return out;
}

/// A rook placement: a quasibasic subset D together with nonzero values
/// phi(a) for a in D (parallel arrays).
struct Placement {
  std::vector<int> root_idx;
  std::vector<uint32_t> phi;
};

/// All placements for one subset, phi tuples in lexicographic order (first
/// root most significant, values 1..p-1 ascending).
inline void append_placements(const std::vector<int>& subset, uint32_t p,
                              std::vector<Placement>& out) {
  size_t k = subset.size();
  std::vector<uint32_t> phi(k, 1);
  for (;;) {
    out.push_back(Placement{subset, phi});
    if (k == 0) return;
    size_t pos = k;
    while (pos > 0) {
      if (++phi[pos - 1] < p) break;
      phi[pos - 1] = 1;
      --pos;
    }
    if (pos == 0) return;
  }
}

inline std::vector<Placement> enumerate_placements(const RootSystem& rs, uint32_t p,
                                                   bool dual = false) {
  require_odd_prime(p);
  std::vector<Placement> out;
  for (const auto& subset : enumerate_quasibasic(rs, dual)) append_placements(subset, p, out);
  return out;
}

/// Number of superclasses (equivalently supercharacters): sum over quasibasic
/// D of (p-1)^{|D|}.
inline unsigned long long count_superclasses(const FormTag& tag, uint32_t p) {
  require_odd_prime(p);
  RootSystem rs(tag);
  unsigned long long total = 0;
  for (const auto& subset : enumerate_quasibasic(rs)) {
    unsigned long long term = 1;
    for (size_t i = 0; i < subset.size(); ++i) term *= (p - 1);
    total += term;
  }
  return total;
}

}  // namespace sylch
