#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sylch/algebra.hpp"

namespace sylch {

// ---------------------------------------------------------------------------
// Linearized generator actions on coordinate vectors.
// ---------------------------------------------------------------------------

/// Both the twisted conjugation action on the Lie algebra and the coadjoint
/// action on its dual are linear in the coordinates, so each generator is an
/// R x R matrix; BFS then works on coordinate vectors without matrix algebra.
class LinearCodeAction {
 public:
  LinearCodeAction(const Structure& s, const std::vector<Mat>& gens, bool dual)
      : R_(s.dim()), p_(s.p()), dual_(dual) {
    mats_.reserve(gens.size());
    std::vector<uint32_t> delta(size_t(R_), 0);
    for (const Mat& g : gens) {
      std::vector<uint32_t> flat(size_t(R_) * R_);
      for (int k = 0; k < R_; ++k) {
        std::vector<uint32_t> col;
        if (dual) {
          std::fill(delta.begin(), delta.end(), 0);
          delta[size_t(k)] = 1;
          col = s.dual_act(g, delta);
        } else {
          col = s.coords_of(s.act_lie(g, s.basis_mat(k)));
        }
        for (int r = 0; r < R_; ++r) flat[size_t(r) * R_ + k] = col[size_t(r)];
      }
      mats_.push_back(std::move(flat));
    }
  }

  size_t generator_count() const { return mats_.size(); }
  int R() const { return R_; }
  bool dual() const { return dual_; }

  void apply(size_t gi, const uint32_t* in, uint32_t* out) const {
    const uint32_t* m = mats_[gi].data();
    for (int r = 0; r < R_; ++r) {
      uint64_t acc = 0;
      const uint32_t* row = m + size_t(r) * R_;
      for (int k = 0; k < R_; ++k) acc += uint64_t(row[k]) * in[k];
      out[r] = uint32_t(acc % p_);
    }
  }

 private:
  int R_;
  uint32_t p_;
  bool dual_;
  std::vector<std::vector<uint32_t>> mats_;
};

// ---------------------------------------------------------------------------
// Orbit partitions of the coordinate space.
// ---------------------------------------------------------------------------

struct OrbitPartition {
  std::vector<int32_t> orbit_of;    ///< orbit id per code, dense over p^R codes
  std::vector<uint64_t> canonical;  ///< per orbit: code of its rook-form element
  std::vector<uint64_t> size;       ///< per orbit: member count
  int count() const { return int(size.size()); }
};

namespace detail {

inline bool is_rook_code(const Structure& s, const std::vector<uint32_t>& coords,
                         bool dual) {
  std::vector<int> support;
  for (int k = 0; k < s.dim(); ++k)
    if (coords[size_t(k)]) support.push_back(k);
  return is_quasibasic(s.roots(), support, dual);
}

}  // namespace detail

/// Sweeps every code and partitions the space into orbits of the action.
/// When `check_rook` is set, asserts that each orbit holds exactly one
/// element in rook form (support a quasibasic set for the action's side)
/// and records it.
inline OrbitPartition partition_codes(const Structure& s, const LinearCodeAction& act,
                                      bool check_rook, uint64_t budget = 5'000'000) {
  uint64_t total = s.space_size();
  if (total > budget)
    throw budget_exceeded("orbit partition needs " + std::to_string(total) +
                          " elements, budget " + std::to_string(budget));
  OrbitPartition part;
  part.orbit_of.assign(size_t(total), -1);
  std::vector<uint64_t> stack;
  std::vector<uint32_t> out(size_t(s.dim()));
  for (uint64_t code = 0; code < total; ++code) {
    if (part.orbit_of[size_t(code)] >= 0) continue;
    int32_t id = int32_t(part.size.size());
    uint64_t members = 0;
    int64_t rook_code = -1;
    part.orbit_of[size_t(code)] = id;
    stack.push_back(code);
    while (!stack.empty()) {
      uint64_t cur = stack.back();
      stack.pop_back();
      ++members;
      std::vector<uint32_t> coords = s.coords_of_code(cur);
      if (check_rook && detail::is_rook_code(s, coords, act.dual())) {
        if (rook_code >= 0)
          throw theorem_violation("two rook-form elements in one orbit: codes " +
                                  std::to_string(rook_code) + " and " + std::to_string(cur));
        rook_code = int64_t(cur);
      }
      for (size_t gi = 0; gi < act.generator_count(); ++gi) {
        act.apply(gi, coords.data(), out.data());
        uint64_t next = s.code_of(out);
        if (part.orbit_of[size_t(next)] < 0) {
          part.orbit_of[size_t(next)] = id;
          stack.push_back(next);
        }
      }
    }
    if (check_rook && rook_code < 0)
      throw theorem_violation("orbit of code " + std::to_string(code) +
                              " holds no rook-form element");
    part.canonical.push_back(check_rook ? uint64_t(rook_code) : code);
    part.size.push_back(members);
  }
  return part;
}

/// Orbits of the twisted conjugation action x -> g x g† restricted to the
/// given generators (the big auxiliary group by default).
inline OrbitPartition lie_orbits(const Structure& s, const std::vector<Mat>& gens,
                                 bool check_rook = true, uint64_t budget = 5'000'000) {
  LinearCodeAction act(s, gens, false);
  return partition_codes(s, act, check_rook, budget);
}

/// Orbits of the coadjoint-type action on coefficient vectors.
inline OrbitPartition dual_orbits(const Structure& s, const std::vector<Mat>& gens,
                                  bool check_rook = true, uint64_t budget = 5'000'000) {
  LinearCodeAction act(s, gens, true);
  return partition_codes(s, act, check_rook, budget);
}

/// Single orbit through a seed coefficient vector under the dual action.
inline std::vector<uint64_t> dual_orbit_of(const Structure& s, const LinearCodeAction& act,
                                           const std::vector<uint32_t>& seed) {
  std::vector<uint64_t> members;
  std::set<uint64_t> seen;
  std::vector<uint64_t> stack{s.code_of(seed)};
  seen.insert(stack.back());
  std::vector<uint32_t> out(size_t(s.dim()));
  while (!stack.empty()) {
    uint64_t cur = stack.back();
    stack.pop_back();
    members.push_back(cur);
    std::vector<uint32_t> coords = s.coords_of_code(cur);
    for (size_t gi = 0; gi < act.generator_count(); ++gi) {
      act.apply(gi, coords.data(), out.data());
      uint64_t next = s.code_of(out);
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

struct OrbitReport {
  std::vector<int> root_idx;  ///< support of the canonical element, ascending
  std::vector<uint32_t> phi;  ///< nonzero values at those roots
  uint64_t size = 0;
};

/// One report per orbit, ordered by canonical code.
inline std::vector<OrbitReport> orbit_reports(const Structure& s, const OrbitPartition& part) {
  std::vector<int> order(size_t(part.count()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return part.canonical[size_t(a)] < part.canonical[size_t(b)];
  });
  std::vector<OrbitReport> out;
  out.reserve(order.size());
  for (int id : order) {
    OrbitReport r;
    auto coords = s.coords_of_code(part.canonical[size_t(id)]);
    for (int k = 0; k < s.dim(); ++k)
      if (coords[size_t(k)]) {
        r.root_idx.push_back(k);
        r.phi.push_back(coords[size_t(k)]);
      }
    r.size = part.size[size_t(id)];
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orbit invariants.
// ---------------------------------------------------------------------------

/// Ranks of the contiguous windows spanned by each positive root: for root
/// (i,j) the submatrix over positions between i and j inclusive.
inline std::vector<int> rank_profile(const Structure& s, const Mat& x) {
  std::vector<int> out;
  out.reserve(size_t(s.dim()));
  for (int k = 0; k < s.dim(); ++k)
    out.push_back(x.window(s.roots().row_pos(k), s.roots().col_pos(k)).rank());
  return out;
}

/// Minor of x over the rows and columns named by a root system: row labels
/// give the row positions, column labels the column positions, each sorted
/// ascending. The empty system has minor 1.
inline Fp nested_minor(const Structure& s, const Mat& x, const std::vector<Root>& system) {
  std::vector<int> rows, cols;
  for (const Root& a : system) {
    rows.push_back(position_of(s.tag(), a.i));
    cols.push_back(position_of(s.tag(), a.j));
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  return x.minor_det(rows, cols);
}

/// The nested system of a root alpha inside D: members weakly below and to
/// the left of alpha in the label order.
inline std::vector<Root> nested_system(const FormTag& tag, const std::vector<Root>& D,
                                       const Root& alpha) {
  std::vector<Root> out;
  int pr = position_of(tag, alpha.i), pc = position_of(tag, alpha.j);
  for (const Root& b : D)
    if (position_of(tag, b.i) >= pr && position_of(tag, b.j) <= pc) out.push_back(b);
  return out;
}

/// Type-B combination that stays constant on an orbit whenever the canonical
/// support contains the root (i, n): combines the three minors tied to the
/// roots (i, n), (i, -n) and (i, 0).
inline Fp bn_invariant(const Structure& s, const Mat& x, const std::vector<Root>& D, int i) {
  if (s.tag().type != GroupType::B)
    throw std::domain_error("invariant is specific to type B");
  int n = s.n();
  Root b1{i, n}, b2{i, -n}, b0{i, 0};
  if (std::find(D.begin(), D.end(), b1) == D.end())
    throw std::invalid_argument("support lacks the row-to-middle root");

  std::vector<Root> d_no_b2;
  for (const Root& a : D)
    if (!(a == b2)) d_no_b2.push_back(a);

  // is there a root (k, 0) with i < k <= n?
  Root k0{0, 0};
  bool has_k0 = false;
  for (const Root& a : D)
    if (a.j == 0 && a.i > i) {
      has_k0 = true;
      k0 = a;
    }

  std::vector<Root> db1 = nested_system(s.tag(), d_no_b2, b1);
  std::vector<Root> tb1 = db1;
  if (has_k0) tb1.push_back(k0);

  std::vector<Root> tb0;
  if (has_k0) {
    tb0 = db1;
    tb0.push_back(Root{k0.i, -n});
  } else {
    for (const Root& a : db1)
      if (!(a == b1)) tb0.push_back(a);
    tb0.push_back(b0);
  }

  std::vector<Root> tb2 = nested_system(s.tag(), D, b2);
  tb2.erase(std::remove(tb2.begin(), tb2.end(), b1), tb2.end());

  Fp m1 = nested_minor(s, x, tb1);
  Fp m0 = nested_minor(s, x, tb0);
  Fp m2 = nested_minor(s, x, tb2);
  return m1 * m2 + inv2(s.p()) * m0 * m0;
}

}  // namespace sylch
