#pragma once
/// Supercharacter theory of the unitriangular isometry groups.
///
/// The superclasses are the orbits of the big auxiliary group acting on the
/// Lie side (x -> g x g†, transported to U through the Springer map), and the
/// supercharacters are induced from linear characters ξ_λ attached to the
/// rook-form functionals λ.  All character values are CycInt cyclotomic
/// integers from the field header; nothing is ever rounded.  This header
/// provides
///   * the anti-self-adjoint extension η of a functional λ      (build_eta),
///   * the one-sided kernels of η and their intersection        (kernel_subalgebras),
///   * per-functional stabiliser data: 𝔤_λ, 𝔲_λ, U_λ, 𝔥_λ, H_λ★λ (build_context),
///   * the linear character ξ_λ, its induction to U (both the literal sum and
///     an exact regrouped form), and the closed orbit-sum formula,
///   * the full verification battery: counts, constancy on superclasses,
///     orthogonality, degree identities and the restriction-fiber description.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sylch/orbits.hpp"

namespace sylch {

// ===========================================================================
// Cyclotomic helpers
// ===========================================================================

namespace detail {

/// Exact division of a cyclotomic integer where an index identity guarantees
/// integrality, so a divisibility failure is a theorem failure.
inline CycInt exact_div(const CycInt& v, long long d, const std::string& what) {
  try {
    return v.div_exact(d);
  } catch (const std::domain_error&) {
    throw theorem_violation("inexact division by " + std::to_string(d) + " in " + what);
  }
}

/// Σ_e hist[e]·ζ^e from an exponent histogram (the hot loops accumulate
/// integer counts and build the cyclotomic value once).
inline CycInt cyc_of_histogram(uint32_t p, const std::vector<uint32_t>& hist) {
  CycInt out = CycInt::zero(p);
  for (uint32_t e = 0; e < p; ++e)
    if (hist[e]) out = out + CycInt::zeta_pow(p, e).scaled((long long)hist[e]);
  return out;
}

}  // namespace detail

// ===========================================================================
// The extension η of a functional and its kernels
// ===========================================================================

/// The canonical extension of λ ∈ 𝔲* to a functional on all m×m matrices:
/// the cell functional M -> Σ η_rc · M_rc carrying φ(α) on each support cell
/// and ε(α)φ(α) on its mirror.  It restricts to λ on 𝔲 and is
/// anti-self-adjoint: η(M†) = -η(M).
class EtaFunctional {
 public:
  EtaFunctional(const Structure& s, const std::vector<uint32_t>& lam)
      : s_(&s), lam_(lam), cells_(s.unfold(lam)) {
    const uint32_t p = s.p();
    if (!(dagger(cells_, s.tag()) == cells_.scaled(Fp(-1, p))))
      throw theorem_violation("extended functional is not anti-self-adjoint");
    for (int r = 0; r < s.tag().m; ++r)
      for (int c = 0; c < s.tag().m; ++c)
        if (cells_.entry(r, c).val()) support_.push_back({r, c, cells_.entry(r, c)});
    // Restriction to 𝔲 must recover λ; by linearity it is enough to pair
    // against every folded basis vector.
    for (int k = 0; k < s.dim(); ++k) {
      std::vector<uint32_t> unit(size_t(s.dim()), 0);
      unit[size_t(k)] = 1;
      if (!((*this)(s.basis_mat(k)) == s.pair_f(lam_, unit)))
        throw theorem_violation("extended functional does not restrict to the original one");
    }
  }

  Fp operator()(const Mat& x) const {
    Fp acc(0, s_->p());
    for (const auto& t : support_) acc = acc + t.coef * x.entry(t.r, t.c);
    return acc;
  }

  const Mat& cells() const { return cells_; }
  const std::vector<uint32_t>& lambda() const { return lam_; }

 private:
  struct Term {
    int r, c;
    Fp coef;
  };
  const Structure* s_;
  std::vector<uint32_t> lam_;
  Mat cells_;
  std::vector<Term> support_;
};

inline EtaFunctional build_eta(const Structure& s, const std::vector<uint32_t>& lam) {
  return EtaFunctional(s, lam);
}

/// The two one-sided kernels of η on the big auxiliary algebra 𝔤^◊ with
/// respect to its ideal 𝔥^◊, and their intersection, all as spans of cell
/// vectors:
///   right = {x : η(x·y)  = 0 for all y in the ideal},
///   left  = {x : η(y†·x) = 0 for all y in the ideal},
///   both  = right ∩ left   (the stabiliser subalgebra of η).
struct KernelData {
  LinearSubspace right;
  LinearSubspace left;
  LinearSubspace both;
};

inline KernelData kernel_subalgebras(const Structure& s, const EtaFunctional& eta) {
  const std::vector<Mat> gb = s.g_diamond_basis();
  const std::vector<Mat> hb = s.h_diamond_basis();
  const uint32_t p = s.p();

  std::vector<std::vector<uint32_t>> right_rows, left_rows;
  for (const Mat& h : hb) {
    const Mat hd = dagger(h, s.tag());
    std::vector<uint32_t> rr(gb.size()), lr(gb.size());
    for (size_t i = 0; i < gb.size(); ++i) {
      rr[i] = eta(gb[i] * h).val();
      lr[i] = eta(hd * gb[i]).val();
    }
    right_rows.push_back(std::move(rr));
    left_rows.push_back(std::move(lr));
  }

  // Solve in basis coefficients, then re-express the solutions as cell spans
  // (the even orthogonal shape has a tied corner vector, so its basis is not
  // a plain list of cells).
  auto to_cells = [&](const LinearSubspace& coef) {
    LinearSubspace out(p, s.cell_count());
    for (const auto& v : coef.basis()) {
      Mat x(s.tag().m, p);
      for (size_t i = 0; i < gb.size(); ++i)
        if (v[i]) x = x + gb[i].scaled(Fp(int64_t(v[i]), p));
      out.insert(s.cellvec_of(x));
    }
    return out;
  };

  LinearSubspace right = to_cells(
      LinearSubspace::nullspace(p, int(gb.size()), right_rows));
  LinearSubspace left = to_cells(
      LinearSubspace::nullspace(p, int(gb.size()), left_rows));
  KernelData kd{right, left, right.intersect(left)};

  // The adjoint map must swap the two kernels and fix their intersection.
  auto daggered = [&](const LinearSubspace& sp) {
    LinearSubspace out(p, s.cell_count());
    for (const auto& v : sp.basis())
      out.insert(s.cellvec_of(dagger(s.mat_of_cellvec(v), s.tag())));
    return out;
  };
  if (!(daggered(kd.right) == kd.left))
    throw theorem_violation("adjoint map does not swap the one-sided kernels");
  if (!(daggered(kd.both) == kd.both))
    throw theorem_violation("kernel intersection is not adjoint-stable");

  // η kills every product of two elements of the intersection, which is what
  // makes ξ_λ multiplicative downstream.
  std::vector<Mat> bmats;
  for (const auto& v : kd.both.basis()) bmats.push_back(s.mat_of_cellvec(v));
  for (const Mat& a : bmats)
    for (const Mat& b : bmats)
      if (eta(a * b).val())
        throw theorem_violation("extended functional does not vanish on kernel products");

  return kd;
}

// ===========================================================================
// Shared per-configuration data
// ===========================================================================

/// Code of the coefficient vector determined by a rook placement.
inline uint64_t placement_code(const Structure& s, const Placement& pl) {
  std::vector<uint32_t> c(size_t(s.dim()), 0);
  for (size_t i = 0; i < pl.root_idx.size(); ++i)
    c[size_t(pl.root_idx[i])] = pl.phi[i];
  return s.code_of(c);
}

/// Everything that is shared between the functionals of one configuration:
/// both orbit partitions with rook-form representatives, the conjugation
/// partition of U on itself (transported to the Lie side through the Springer
/// map), per-code coefficient vectors, and per-code cell vectors of u-1 (for
/// the even types) and of the middle-free part of u (for the odd type).
class TheoryWorkspace {
 public:
  explicit TheoryWorkspace(const Structure& s, uint64_t budget = 5'000'000,
                           SpringerKind kind = SpringerKind::cayley)
      : s_(&s),
        kind_(kind),
        lie_(lie_orbits(s, s.gens_G_script(kind), true, budget)),
        dual_(dual_orbits(s, s.gens_G_script(kind), true, budget)),
        conj_(partition_codes(s, LinearCodeAction(s, s.gens_U(kind), false), false, budget)) {
    const uint64_t total = s.space_size();
    const int r = s.dim();
    const int nc = s.cell_count();

    dual_members_.resize(size_t(dual_.count()));
    conj_members_.resize(size_t(conj_.count()));
    for (uint64_t code = 0; code < total; ++code) {
      dual_members_[size_t(dual_.orbit_of[size_t(code)])].push_back(uint32_t(code));
      conj_members_[size_t(conj_.orbit_of[size_t(code)])].push_back(uint32_t(code));
    }

    coords8_.resize(size_t(total) * size_t(r));
    umo_.resize(size_t(total) * size_t(nc));
    const bool odd_type = s.tag().type == GroupType::B;
    if (odd_type) wmo_.resize(size_t(total) * size_t(nc));
    const Mat one = Mat::identity(s.tag().m, s.p());
    const int mid_r = s.tag().n - 1;  // positions of the one-parameter middle entry
    const int mid_c = s.tag().n;
    for (uint64_t code = 0; code < total; ++code) {
      std::vector<uint32_t> coords = s.coords_of_code(code);
      for (int k = 0; k < r; ++k) coords8_[size_t(code) * size_t(r) + size_t(k)] = uint8_t(coords[size_t(k)]);
      Mat u = s.springer_inv(s.mat_of(coords), kind);
      std::vector<uint32_t> cv = s.cellvec_of(u - one);
      for (int k = 0; k < nc; ++k) umo_[size_t(code) * size_t(nc) + size_t(k)] = uint8_t(cv[size_t(k)]);
      if (odd_type) {
        Mat w = s.expc(Fp(0, s.p()) - u.entry(mid_r, mid_c)) * u;
        std::vector<uint32_t> wv = s.cellvec_of(w - one);
        for (int k = 0; k < nc; ++k) wmo_[size_t(code) * size_t(nc) + size_t(k)] = uint8_t(wv[size_t(k)]);
      }
    }

    char_placements_ = enumerate_placements(s.roots(), s.p(), /*dual=*/true);
    class_placements_ = enumerate_placements(s.roots(), s.p(), /*dual=*/false);
  }

  const Structure& str() const { return *s_; }
  uint64_t group_order() const { return s_->space_size(); }
  SpringerKind springer_kind() const { return kind_; }

  const OrbitPartition& element_orbits() const { return lie_; }
  const OrbitPartition& functional_orbits() const { return dual_; }
  const OrbitPartition& conjugation_orbits() const { return conj_; }
  const std::vector<std::vector<uint32_t>>& functional_members() const { return dual_members_; }
  const std::vector<std::vector<uint32_t>>& conjugation_members() const { return conj_members_; }
  const std::vector<Placement>& char_placements() const { return char_placements_; }
  const std::vector<Placement>& class_placements() const { return class_placements_; }

  /// Coefficient vector of a code, cached.
  const uint8_t* coords8(uint64_t code) const {
    return coords8_.data() + size_t(code) * size_t(s_->dim());
  }
  /// λ(x_code) as an exponent mod p.
  uint32_t pair_with(const std::vector<uint32_t>& lam, uint64_t code) const {
    const uint8_t* xc = coords8(code);
    uint64_t acc = 0;
    for (int k = 0; k < s_->dim(); ++k)
      acc += uint64_t(s_->weight(k)) * lam[size_t(k)] % s_->p() * xc[k];
    return uint32_t(acc % s_->p());
  }
  /// Cell vector of u-1 for the group element with f(u) = x_code.
  void u_minus_one(uint64_t code, std::vector<uint32_t>& out) const {
    const int nc = s_->cell_count();
    out.resize(size_t(nc));
    const uint8_t* src = umo_.data() + size_t(code) * size_t(nc);
    for (int k = 0; k < nc; ++k) out[size_t(k)] = src[k];
  }
  /// Cell vector of w-1 where w is u with its middle one-parameter part
  /// stripped (odd type only).
  void middle_free_minus_one(uint64_t code, std::vector<uint32_t>& out) const {
    const int nc = s_->cell_count();
    out.resize(size_t(nc));
    const uint8_t* src = wmo_.data() + size_t(code) * size_t(nc);
    for (int k = 0; k < nc; ++k) out[size_t(k)] = src[k];
  }

 private:
  const Structure* s_;
  SpringerKind kind_;
  OrbitPartition lie_, dual_, conj_;
  std::vector<std::vector<uint32_t>> dual_members_, conj_members_;
  std::vector<uint8_t> coords8_, umo_, wmo_;
  std::vector<Placement> char_placements_, class_placements_;
};

// ===========================================================================
// Per-functional stabiliser data
// ===========================================================================

/// Stabiliser data of one rook-form functional λ.
struct LambdaContext {
  std::vector<uint32_t> lam;  ///< coefficients over the root basis
  uint64_t lam_code;          ///< code of λ in the functional space
  int dual_orbit;             ///< id of the orbit 𝒢★λ in the functional partition
  bool meets_middle;          ///< some support root lies in the middle column block
  bool middle_split;          ///< the middle one-parameter subgroup fixes λ and joins U_λ
  KernelData kernels;         ///< kernels of η on 𝔤^◊
  LinearSubspace g_lambda;    ///< stabiliser subalgebra 𝔤_λ (cell span)
  LinearSubspace u_lambda;    ///< 𝔲_λ = 𝔲 ∩ 𝔤_λ
  LinearSubspace h_lambda;    ///< associative closure of 𝔤_λ + 𝔥^◊
  std::vector<char> domain;   ///< per element code: 1 iff the group element lies in U_λ
  uint64_t u_lambda_order;    ///< |U_λ|
  uint64_t h_orbit_size;      ///< |H_λ ★ λ|
  std::vector<uint64_t> h_orbit_codes;  ///< sorted codes of H_λ ★ λ
};

namespace detail {

/// Orbit of the extended functional under the sandwich action
/// (h★η)(x) = η(h†·x·h), realised on full matrices as M -> (h†)ᵗ·M·hᵗ, for h
/// running over the given group generators.  The intermediate functionals
/// need their values outside 𝔲 because the acting group does not preserve the
/// form, so the states live in the whole matrix space.  To keep the search
/// small the states are taken modulo the largest subspace that is invariant
/// under every generator map and invisible to the restriction map (the
/// unobservable subspace of the linear system); the restriction to 𝔲 is
/// constant on those cosets, so the image set of codes is exact.
inline std::vector<uint64_t> star_orbit_restrictions(const Structure& s, const Mat& eta_cells,
                                                     const std::vector<Mat>& gens,
                                                     uint64_t budget) {
  const uint32_t p = s.p();
  const int m = s.tag().m;
  const int amb = m * m;
  std::vector<std::pair<Mat, Mat>> maps;  // ((g†)ᵗ, gᵗ) per generator
  maps.reserve(gens.size());
  for (const Mat& g : gens)
    maps.push_back({dagger(g, s.tag()).transpose(), g.transpose()});

  auto vec_of = [&](const Mat& x) {
    std::vector<uint32_t> v(size_t(amb), 0u);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) v[size_t(r * m + c)] = x.entry(r, c).val();
    return v;
  };
  auto mat_of = [&](const std::vector<uint32_t>& v) {
    Mat x(m, p);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        if (v[size_t(r * m + c)]) x.set(r, c, v[size_t(r * m + c)]);
    return x;
  };

  // Row space of the observation constraints, saturated under composition
  // with every generator map; its kernel is invariant and unobservable.
  LinearSubspace obs(p, amb);
  {
    const RootSystem& rs = s.roots();
    for (int k = 0; k < s.dim(); ++k) {
      std::vector<uint32_t> row(size_t(amb), 0);
      row[size_t(rs.row_pos(k) * m + rs.col_pos(k))] = 1;
      if (!rs.minfo(k).self_paired) {
        uint32_t eps = Fp(rs.minfo(k).eps, p).val();
        row[size_t(rs.mirror_row_pos(k) * m + rs.mirror_col_pos(k))] = eps;
      }
      obs.insert(std::move(row));
    }
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<std::vector<uint32_t>> rows = obs.basis();
      for (const auto& row : rows) {
        // (row ∘ T_g)(v) = row(A·M·B) computed as the cell functional AᵗRBᵗ.
        Mat rmat = mat_of(row);
        for (const auto& gm : maps) {
          Mat pushed = gm.first.transpose() * rmat * gm.second.transpose();
          if (obs.insert(vec_of(pushed))) grew = true;
        }
      }
    }
  }
  LinearSubspace dead = LinearSubspace::nullspace(p, amb, obs.basis());

  auto canonical = [&](const Mat& x) {
    std::vector<uint32_t> v = dead.reduce(vec_of(x));
    std::string key(v.size(), '\0');
    for (size_t i = 0; i < v.size(); ++i) key[i] = char(v[i]);
    return key;
  };

  std::unordered_set<std::string> seen;
  std::vector<Mat> stack{eta_cells};
  seen.insert(canonical(eta_cells));
  std::unordered_set<uint64_t> image;
  while (!stack.empty()) {
    Mat cur = std::move(stack.back());
    stack.pop_back();
    image.insert(s.code_of(s.fold(cur)));
    for (const auto& gm : maps) {
      Mat next = gm.first * cur * gm.second;
      if (seen.size() > budget)
        throw budget_exceeded("functional orbit exploration exceeded " +
                              std::to_string(budget) + " states");
      if (seen.insert(canonical(next)).second) stack.push_back(std::move(next));
    }
  }
  std::vector<uint64_t> out(image.begin(), image.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Builds the stabiliser data of a rook-form functional.  Throws
/// std::domain_error if λ is not in rook form, and theorem_violation if any
/// of the structural identities proved about these objects fails to hold.
inline LambdaContext build_context(const TheoryWorkspace& ws,
                                   const std::vector<uint32_t>& lam) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  const int n = s.tag().n;

  std::vector<int> support;
  for (int k = 0; k < s.dim(); ++k)
    if (lam[size_t(k)]) support.push_back(k);
  if (!is_quasibasic(s.roots(), support, /*dual=*/true))
    throw std::domain_error("functional is not in rook form");

  EtaFunctional eta = build_eta(s, lam);
  KernelData kd = kernel_subalgebras(s, eta);

  // The middle one-parameter subgroup joins the stabiliser data exactly when
  // it fixes λ.  Support in the middle column block usually prevents that,
  // but a root (i,n) without its companion (i,-n), and the root (n,0), leave
  // λ fixed because the coordinate move needs the companion root's column.
  bool meets_middle = false;
  for (int k : support) {
    int j = s.roots().roots()[size_t(k)].j;
    if (j == 0 || j == n || j == -n) meets_middle = true;
  }
  const bool odd_type = s.tag().type == GroupType::B;
  const bool split_case = odd_type && s.dual_act(s.expc(Fp(1, p)), lam) == lam;

  LinearSubspace g_lambda = kd.both;
  if (split_case) {
    LinearSubspace mid(p, s.cell_count());
    mid.insert(s.cellvec_of(s.s_direction()));
    g_lambda = g_lambda.sum(mid);
  }

  // 𝔲_λ = 𝔲 ∩ 𝔤_λ.
  std::vector<Mat> u_basis;
  for (int k = 0; k < s.dim(); ++k) u_basis.push_back(s.basis_mat(k));
  LinearSubspace u_span = s.cell_span(u_basis);
  LinearSubspace u_lambda = u_span.intersect(g_lambda);

  // The one-sided kernels agree on 𝔲 and the common part is 𝔲 ∩ 𝔤_η.
  {
    LinearSubspace ur = u_span.intersect(kd.right);
    LinearSubspace ul = u_span.intersect(kd.left);
    LinearSubspace ub = u_span.intersect(kd.both);
    if (!(ur == ul) || !(ur == ub))
      throw theorem_violation("one-sided kernels disagree on the form algebra");
  }

  // U_λ as a code set: the group element belongs iff its middle-free part
  // (odd split case) or the element itself (all other cases) sits in 1+𝔤_η.
  const uint64_t total = ws.group_order();
  std::vector<char> domain(size_t(total), 0);
  uint64_t order = 0;
  std::vector<uint32_t> cv;
  for (uint64_t code = 0; code < total; ++code) {
    if (split_case)
      ws.middle_free_minus_one(code, cv);
    else
      ws.u_minus_one(code, cv);
    if (kd.both.contains(cv)) {
      domain[size_t(code)] = 1;
      ++order;
    }
  }

  // The Springer map carries U_λ exactly onto 𝔲_λ.
  {
    std::vector<uint64_t> span_codes;
    for (const auto& v : u_lambda.enumerate(total + 1)) {
      Mat x = s.mat_of_cellvec(v);
      span_codes.push_back(s.code_of(s.coords_of(x)));
    }
    std::sort(span_codes.begin(), span_codes.end());
    std::vector<uint64_t> dom_codes;
    for (uint64_t code = 0; code < total; ++code)
      if (domain[size_t(code)]) dom_codes.push_back(code);
    if (span_codes != dom_codes)
      throw theorem_violation("group stabiliser does not match its subalgebra under the Springer map");
  }

  // 𝔥_λ and the orbit H_λ★λ.
  std::vector<Mat> seed;
  for (const auto& v : g_lambda.basis()) seed.push_back(s.mat_of_cellvec(v));
  for (Mat& h : s.h_diamond_basis()) seed.push_back(std::move(h));
  LinearSubspace h_lambda = s.associative_closure(seed);
  std::vector<Mat> h_basis;
  for (const auto& v : h_lambda.basis()) h_basis.push_back(s.mat_of_cellvec(v));
  std::vector<uint64_t> h_orbit = detail::star_orbit_restrictions(
      s, eta.cells(), s.algebra_group_generators(h_basis), 1'000'000);

  LambdaContext ctx{lam,
                    s.code_of(lam),
                    0,
                    meets_middle,
                    split_case,
                    std::move(kd),
                    std::move(g_lambda),
                    std::move(u_lambda),
                    std::move(h_lambda),
                    std::move(domain),
                    order,
                    h_orbit.size(),
                    std::move(h_orbit)};
  ctx.dual_orbit = ws.functional_orbits().orbit_of[size_t(ctx.lam_code)];
  return ctx;
}

// ===========================================================================
// Characters
// ===========================================================================

/// The linear character ξ_λ(u) = ζ^{λ(f(u))} on U_λ.
inline CycInt xi(const TheoryWorkspace& ws, const LambdaContext& ctx, const Mat& u) {
  const Structure& s = ws.str();
  if (!s.in_U(u)) throw std::domain_error("not an element of the group");
  uint64_t code = s.code_of(s.coords_of(s.springer(u, ws.springer_kind())));
  if (!ctx.domain[size_t(code)])
    throw std::domain_error("element lies outside the character's domain");
  return CycInt::zeta_pow(s.p(), ws.pair_with(ctx.lam, code));
}

/// Induction of ξ_λ from U_λ to U, evaluated at the element u with
/// f(u) = x_code.  The literal sum over v ∈ U of the extended character at
/// v·u·v⁻¹ is regrouped: the Springer map intertwines conjugation with the
/// twisted action x -> v·x·v† (v† = v⁻¹ on U), so summing over the
/// conjugation orbit of x with multiplicity |U|/|orbit| gives the same total.
/// Everything stays integral; the final division by |U_λ| is checked exact.
inline CycInt induce(const TheoryWorkspace& ws, const LambdaContext& ctx, uint64_t code) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  int oid = ws.conjugation_orbits().orbit_of[size_t(code)];
  std::vector<uint32_t> hist(p, 0);
  for (uint32_t y : ws.conjugation_members()[size_t(oid)])
    if (ctx.domain[size_t(y)]) ++hist[ws.pair_with(ctx.lam, y)];
  long long stab = (long long)(ws.group_order() / ws.conjugation_orbits().size[size_t(oid)]);
  return detail::exact_div(detail::cyc_of_histogram(p, hist).scaled(stab),
                           (long long)ctx.u_lambda_order, "the induced character sum");
}

/// The same induction computed directly from the definition, as a sum of
/// actual matrix conjugates over the whole group.  Exponential in the rank;
/// used as an independent cross-check at small sizes.
inline CycInt induce_naive(const TheoryWorkspace& ws, const LambdaContext& ctx, uint64_t code) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  const uint64_t total = ws.group_order();
  const SpringerKind kind = ws.springer_kind();
  Mat u = s.springer_inv(s.mat_of(s.coords_of_code(code)), kind);
  std::vector<uint32_t> hist(p, 0);
  for (uint64_t vc = 0; vc < total; ++vc) {
    Mat v = s.springer_inv(s.mat_of(s.coords_of_code(vc)), kind);
    Mat conj = v * u * v.inverse_unitriangular();
    uint64_t ycode = s.code_of(s.coords_of(s.springer(conj, kind)));
    if (ctx.domain[size_t(ycode)]) ++hist[ws.pair_with(ctx.lam, ycode)];
  }
  return detail::exact_div(detail::cyc_of_histogram(p, hist), (long long)ctx.u_lambda_order,
                           "the induced character sum");
}

/// Closed form of the supercharacter: the orbit sum
///   χ_λ(u) = (|H_λ★λ| / |𝒢★λ|) Σ_{μ ∈ 𝒢★λ} ζ^{μ(f(u))}.
inline CycInt orbit_formula(const TheoryWorkspace& ws, const LambdaContext& ctx, uint64_t code) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  const auto& members = ws.functional_members()[size_t(ctx.dual_orbit)];
  std::vector<uint32_t> hist(p, 0);
  const uint8_t* xc = ws.coords8(code);
  for (uint32_t mc : members) {
    const uint8_t* mcoords = ws.coords8(mc);
    uint64_t acc = 0;
    for (int k = 0; k < s.dim(); ++k)
      acc += uint64_t(s.weight(k)) * mcoords[k] % p * xc[k];
    ++hist[acc % p];
  }
  return detail::exact_div(
      detail::cyc_of_histogram(p, hist).scaled((long long)ctx.h_orbit_size),
      (long long)members.size(), "the orbit-sum formula");
}

/// All functionals agreeing with λ on 𝔲_λ, enumerated directly from the
/// linear conditions, as sorted codes.  Exponential in the rank.
inline std::vector<uint64_t> restriction_fiber(const TheoryWorkspace& ws,
                                               const LambdaContext& ctx) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  // Coefficients of each 𝔲_λ basis vector over the root basis.
  std::vector<std::vector<uint32_t>> basis_coords;
  for (const auto& v : ctx.u_lambda.basis())
    basis_coords.push_back(s.coords_of(s.mat_of_cellvec(v)));
  const uint64_t total = ws.group_order();
  std::vector<uint64_t> out;
  for (uint64_t mc = 0; mc < total; ++mc) {
    const uint8_t* mu = ws.coords8(mc);
    bool ok = true;
    for (const auto& b : basis_coords) {
      uint64_t lhs = 0, rhs = 0;
      for (int k = 0; k < s.dim(); ++k) {
        lhs += uint64_t(s.weight(k)) * mu[k] % p * b[size_t(k)];
        rhs += uint64_t(s.weight(k)) * ctx.lam[size_t(k)] % p * b[size_t(k)];
      }
      if (lhs % p != rhs % p) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(mc);
  }
  return out;
}

// ===========================================================================
// The table and the verification battery
// ===========================================================================

/// Supercharacter table: rows indexed by the rook placements of functionals,
/// columns by the rook placements of elements, both in enumeration order.
struct SuperTable {
  std::vector<Placement> char_labels;
  std::vector<Placement> class_labels;
  std::vector<uint64_t> class_codes;    ///< Lie-side representative per class
  std::vector<uint64_t> class_sizes;
  std::vector<long long> degrees;       ///< χ_λ(1)
  std::vector<std::vector<CycInt>> values;  ///< [character][class]
};

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
  double seconds = 0.0;  ///< wall time spent computing this check
};

struct VerificationReport {
  GroupType type;
  int n = 0;
  uint32_t p = 0;
  uint64_t group_order = 0;
  int class_count = 0;
  int char_count = 0;
  unsigned long long census = 0;
  std::vector<CheckLine> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

namespace detail {

/// Scaled coefficient rows of one functional orbit: row[k] = weight_k · μ_k.
inline std::vector<uint8_t> scaled_member_rows(const TheoryWorkspace& ws, int orbit) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  const auto& members = ws.functional_members()[size_t(orbit)];
  const int r = s.dim();
  std::vector<uint8_t> rows(members.size() * size_t(r));
  for (size_t i = 0; i < members.size(); ++i) {
    const uint8_t* mu = ws.coords8(members[i]);
    for (int k = 0; k < r; ++k)
      rows[i * size_t(r) + size_t(k)] = uint8_t(uint32_t(s.weight(k)) * mu[k] % p);
  }
  return rows;
}

/// Exponent histogram of ζ^{μ(x)} over an orbit at one point x.
inline void orbit_histogram(const TheoryWorkspace& ws, const std::vector<uint8_t>& rows,
                            size_t count, uint64_t code, uint32_t* hist) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  const int r = s.dim();
  for (uint32_t e = 0; e < p; ++e) hist[e] = 0;
  const uint8_t* xc = ws.coords8(code);
  for (size_t i = 0; i < count; ++i) {
    const uint8_t* row = rows.data() + i * size_t(r);
    uint32_t acc = 0;
    for (int k = 0; k < r; ++k) acc += uint32_t(row[k]) * xc[k];
    ++hist[acc % p];
  }
}

}  // namespace detail

/// Builds the full supercharacter table from the closed orbit-sum formula.
/// The contexts are built (and their structural checks run) for every
/// functional placement.
inline SuperTable build_table(const TheoryWorkspace& ws,
                              const std::vector<LambdaContext>& contexts) {
  const Structure& s = ws.str();
  SuperTable t;
  t.char_labels = ws.char_placements();
  t.class_labels = ws.class_placements();
  for (const Placement& pl : t.class_labels) {
    uint64_t code = placement_code(s, pl);
    t.class_codes.push_back(code);
    t.class_sizes.push_back(
        ws.element_orbits().size[size_t(ws.element_orbits().orbit_of[size_t(code)])]);
  }
  for (const LambdaContext& ctx : contexts) {
    std::vector<CycInt> row;
    row.reserve(t.class_codes.size());
    for (uint64_t code : t.class_codes) row.push_back(orbit_formula(ws, ctx, code));
    t.degrees.push_back((long long)ctx.h_orbit_size);
    t.values.push_back(std::move(row));
  }
  return t;
}

inline std::vector<LambdaContext> build_all_contexts(const TheoryWorkspace& ws) {
  std::vector<LambdaContext> out;
  out.reserve(ws.char_placements().size());
  for (const Placement& pl : ws.char_placements()) {
    std::vector<uint32_t> lam(size_t(ws.str().dim()), 0);
    for (size_t i = 0; i < pl.root_idx.size(); ++i)
      lam[size_t(pl.root_idx[i])] = pl.phi[i];
    out.push_back(build_context(ws, lam));
  }
  return out;
}

/// Runs the whole verification battery for one configuration.  When
/// full_sweep is set the constancy check visits every single element of the
/// group; otherwise it visits the placement representatives only.
inline VerificationReport verify_theory(const TheoryWorkspace& ws, bool full_sweep = true) {
  const Structure& s = ws.str();
  const uint32_t p = s.p();
  VerificationReport rep;
  rep.type = s.tag().type;
  rep.n = s.tag().n;
  rep.p = p;
  rep.group_order = ws.group_order();
  rep.class_count = ws.element_orbits().count();
  rep.char_count = ws.functional_orbits().count();
  rep.census = count_superclasses(s.tag(), p);

  auto prof_last = std::chrono::steady_clock::now();
  const bool prof = std::getenv("SYLCH_PROF") != nullptr;
  auto add = [&](const std::string& name, bool pass, std::string detail = "") {
    auto now = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(now - prof_last).count();
    prof_last = now;
    if (prof) std::fprintf(stderr, "  [prof] %6.2fs  %s\n", secs, name.c_str());
    rep.checks.push_back(CheckLine{name, pass, std::move(detail), secs});
  };

  // Counting: superclasses, supercharacters and the census formula agree.
  {
    bool ok = rep.class_count == rep.char_count &&
              (unsigned long long)rep.class_count == rep.census &&
              ws.char_placements().size() == size_t(rep.char_count) &&
              ws.class_placements().size() == size_t(rep.class_count);
    add("superclass, supercharacter and census counts agree", ok,
        std::to_string(rep.class_count) + " classes, " + std::to_string(rep.char_count) +
            " characters, census " + std::to_string(rep.census));
  }

  // The identity's superclass is the singleton {1}, and the trivial
  // functional's orbit is the singleton {0}.
  add("identity superclass is the singleton {1}",
      ws.element_orbits().size[size_t(ws.element_orbits().orbit_of[0])] == 1 &&
          ws.functional_orbits().size[size_t(ws.functional_orbits().orbit_of[0])] == 1);

  // Stabiliser data for every functional (each build runs its own structural
  // checks and throws on failure).
  std::vector<LambdaContext> contexts;
  try {
    contexts = build_all_contexts(ws);
    add("stabiliser data is consistent for every functional", true,
        std::to_string(contexts.size()) + " functionals");
  } catch (const std::exception& e) {
    add("stabiliser data is consistent for every functional", false, e.what());
    return rep;
  }

  // Degree law: χ_λ(1) computed by induction equals the subgroup index
  // |U|/|U_λ| and the orbit size |H_λ★λ|.
  {
    bool ok = true;
    std::string detail;
    for (const LambdaContext& ctx : contexts) {
      CycInt by_induction = induce(ws, ctx, 0);
      long long index = (long long)(ws.group_order() / ctx.u_lambda_order);
      bool divides = ws.group_order() % ctx.u_lambda_order == 0;
      if (!divides || !by_induction.is_rational_integer() ||
          by_induction.as_rational_integer() != index ||
          index != (long long)ctx.h_orbit_size) {
        ok = false;
        detail = "functional code " + std::to_string(ctx.lam_code);
        break;
      }
    }
    add("degree law: induced degree = subgroup index = functional orbit size", ok, detail);
  }

  // The induced character equals the closed orbit-sum formula on every
  // superclass representative.
  {
    bool ok = true;
    std::string detail;
    for (const LambdaContext& ctx : contexts) {
      for (int oid = 0; oid < ws.element_orbits().count() && ok; ++oid) {
        uint64_t rep_code = ws.element_orbits().canonical[size_t(oid)];
        if (!(induce(ws, ctx, rep_code) == orbit_formula(ws, ctx, rep_code))) {
          ok = false;
          detail = "functional code " + std::to_string(ctx.lam_code) +
                   ", class code " + std::to_string(rep_code);
        }
      }
      if (!ok) break;
    }
    add("induced characters equal the orbit-sum formula", ok, detail);
  }

  SuperTable table = build_table(ws, contexts);

  // Constancy on superclasses: for each functional the orbit sum (hence the
  // supercharacter) takes one value on each element orbit.  The full sweep
  // computes the exponent histogram of ζ^{μ(x)} at every point x at once by
  // a counting Fourier transform over F_p^R: the cube starts as the orbit's
  // indicator with count 1 at exponent 0, and the pass over coordinate k
  // turns the μ_k digit of the index into the x_k digit while folding the
  // term w_k·μ_k·x_k into the exponent slot.  The direct per-point histogram
  // cross-checks the transform on every class representative.
  {
    bool ok = true;
    std::string detail;
    const uint64_t total = ws.group_order();
    const int classes = ws.element_orbits().count();
    const int r = s.dim();
    std::vector<uint32_t> ref(size_t(classes) * p);
    std::vector<uint32_t> cube;
    std::vector<uint32_t> in(size_t(p) * p), out(size_t(p) * p);
    for (const LambdaContext& ctx : contexts) {
      const auto& members = ws.functional_members()[size_t(ctx.dual_orbit)];
      std::vector<uint8_t> rows = detail::scaled_member_rows(ws, ctx.dual_orbit);
      for (int oid = 0; oid < classes; ++oid)
        detail::orbit_histogram(ws, rows, members.size(),
                                ws.element_orbits().canonical[size_t(oid)],
                                ref.data() + size_t(oid) * p);
      if (!full_sweep) continue;
      cube.assign(size_t(total) * p, 0u);
      for (uint64_t mu : members) ++cube[size_t(mu) * p];
      uint64_t stride = 1;
      for (int k = 0; k < r; ++k, stride *= p) {
        const uint32_t wk = uint32_t(s.weight(k)) % p;
        for (uint64_t hi = 0; hi < total; hi += stride * p) {
          for (uint64_t lo = 0; lo < stride; ++lo) {
            const uint64_t base = hi + lo;
            for (uint32_t d = 0; d < p; ++d)
              std::copy_n(cube.data() + (base + d * stride) * p, p, in.data() + d * p);
            std::fill(out.begin(), out.end(), 0u);
            for (uint32_t d = 0; d < p; ++d)
              for (uint32_t x = 0; x < p; ++x) {
                const uint32_t shift = wk * d % p * x % p;
                const uint32_t* src = in.data() + d * p;
                uint32_t* dst = out.data() + x * p;
                for (uint32_t e = 0; e < p; ++e) {
                  uint32_t t = e + shift;
                  dst[t >= p ? t - p : t] += src[e];
                }
              }
            for (uint32_t d = 0; d < p; ++d)
              std::copy_n(out.data() + d * p, p, cube.data() + (base + d * stride) * p);
          }
        }
      }
      for (int oid = 0; oid < classes && ok; ++oid) {
        uint64_t rep = ws.element_orbits().canonical[size_t(oid)];
        if (!std::equal(ref.data() + size_t(oid) * p, ref.data() + (size_t(oid) + 1) * p,
                        cube.data() + rep * p)) {
          ok = false;
          detail = "transform disagrees with the direct histogram at class code " +
                   std::to_string(rep);
        }
      }
      for (uint64_t code = 0; code < total && ok; ++code) {
        const uint32_t* want =
            ref.data() + size_t(ws.element_orbits().orbit_of[size_t(code)]) * p;
        if (!std::equal(want, want + p, cube.data() + code * p)) {
          ok = false;
          detail = "functional code " + std::to_string(ctx.lam_code) + ", element code " +
                   std::to_string(code);
        }
      }
      if (!ok) break;
    }
    add(full_sweep ? "supercharacters are constant on superclasses (every element)"
                   : "supercharacters are constant on superclasses (representatives)",
        ok, detail);
  }

  // Exact orthogonality, and the self inner products ⟨χ,χ⟩ = |U|·|H★λ|²/|𝒢★λ|.
  {
    bool ortho = true, norms = true;
    std::string od, nd;
    const size_t nc = contexts.size();
    for (size_t a = 0; a < nc; ++a) {
      for (size_t b = a; b < nc; ++b) {
        CycInt acc = CycInt::zero(p);
        for (size_t k = 0; k < table.class_codes.size(); ++k)
          acc = acc + (table.values[a][k] * table.values[b][k].conj())
                          .scaled((long long)table.class_sizes[k]);
        if (a != b) {
          if (!acc.is_zero() && ortho) {
            ortho = false;
            od = "characters " + std::to_string(a) + " and " + std::to_string(b);
          }
        } else {
          const LambdaContext& ctx = contexts[a];
          long long orbit = (long long)ws.functional_members()[size_t(ctx.dual_orbit)].size();
          CycInt want = detail::exact_div(
              CycInt::from_int(p, (long long)ctx.h_orbit_size * (long long)ctx.h_orbit_size)
                  .scaled((long long)ws.group_order()),
              orbit, "the self inner product");
          if (!(acc == want) && norms) {
            norms = false;
            nd = "character " + std::to_string(a);
          }
        }
      }
    }
    add("distinct supercharacters are orthogonal", ortho, od);
    add("self inner products match the orbit sizes", norms, nd);
  }

  // Resolving the regular character: Σ_λ (|𝒢★λ|/|H★λ|)·χ_λ vanishes away
  // from the identity and totals |U| at it.
  {
    bool ok = true;
    std::string detail;
    for (size_t k = 0; k < table.class_codes.size(); ++k) {
      CycInt acc = CycInt::zero(p);
      for (size_t a = 0; a < contexts.size(); ++a) {
        const LambdaContext& ctx = contexts[a];
        long long orbit = (long long)ws.functional_members()[size_t(ctx.dual_orbit)].size();
        acc = acc + detail::exact_div(table.values[a][k].scaled(orbit),
                                      (long long)ctx.h_orbit_size,
                                      "the regular character resolution");
      }
      CycInt want = table.class_codes[k] == 0
                        ? CycInt::from_int(p, (long long)ws.group_order())
                        : CycInt::zero(p);
      if (!(acc == want)) {
        ok = false;
        detail = "class code " + std::to_string(table.class_codes[k]);
        break;
      }
    }
    add("supercharacters resolve the regular character", ok, detail);
  }

  // The restricted characters are multiplicative on their whole domains.
  // Directly checking every pair is quadratic in |U_λ|; instead the additive
  // law is checked for every (generator, element) pair and the generators are
  // shown to reach the whole domain by a closure walk.  Induction on the word
  // length then settles every pair exactly: ξ(g·w·u) = ξ(g) + ξ(w·u).
  {
    bool ok = true;
    std::string detail;
    const uint64_t total = ws.group_order();
    for (const LambdaContext& ctx : contexts) {
      auto fail = [&](const std::string& why) {
        ok = false;
        detail = "functional code " + std::to_string(ctx.lam_code) + ": " + why;
      };
      std::vector<std::pair<Mat, uint32_t>> gens;  // group element, its exponent
      for (const auto& v : ctx.u_lambda.basis())
        for (uint32_t t = 1; t < p; ++t) {
          Mat x = s.mat_of_cellvec(v).scaled(Fp(t, p));
          uint64_t code = s.code_of(s.coords_of(x));
          if (!ctx.domain[size_t(code)]) {
            fail("generator outside the domain");
            break;
          }
          gens.push_back({s.springer_inv(x, ws.springer_kind()), ws.pair_with(ctx.lam, code)});
        }
      if (!ok) break;
      // Closure walk over codes: the generators must reach the whole domain.
      std::vector<char> seen(size_t(total), 0);
      std::vector<uint64_t> stack{0};
      seen[0] = 1;
      uint64_t reached = 1;
      while (!stack.empty() && ok) {
        uint64_t code = stack.back();
        stack.pop_back();
        Mat u = s.springer_inv(s.mat_of(s.coords_of_code(code)), ws.springer_kind());
        uint32_t eu = ws.pair_with(ctx.lam, code);
        for (const auto& [g, eg] : gens) {
          uint64_t pc = s.code_of(s.coords_of(s.springer(g * u, ws.springer_kind())));
          if (!ctx.domain[size_t(pc)]) {
            fail("domain is not closed under products");
            break;
          }
          if (ws.pair_with(ctx.lam, pc) != (eg + eu) % p) {
            fail("exponent is not additive at element code " + std::to_string(code));
            break;
          }
          if (!seen[size_t(pc)]) {
            seen[size_t(pc)] = 1;
            ++reached;
            stack.push_back(pc);
          }
        }
      }
      if (ok && reached != ctx.u_lambda_order) fail("generators do not span the domain");
      if (!ok) break;
    }
    add("restricted characters are multiplicative on their whole domains", ok, detail);
  }

  // Distinct rows: the table separates its characters.
  {
    bool ok = true;
    for (size_t a = 0; a < table.values.size() && ok; ++a)
      for (size_t b = a + 1; b < table.values.size(); ++b) {
        bool same = true;
        for (size_t k = 0; k < table.class_codes.size(); ++k)
          if (table.values[a][k] != table.values[b][k]) {
            same = false;
            break;
          }
        if (same) {
          ok = false;
          break;
        }
      }
    add("supercharacter table rows are pairwise distinct", ok);
  }

  return rep;
}

/// Convenience entry point: builds the configuration and runs the battery.
inline VerificationReport verify_theory(const FormTag& tag, uint32_t p,
                                        uint64_t budget = 5'000'000,
                                        bool full_sweep = true,
                                        SpringerKind kind = SpringerKind::cayley) {
  Structure s(tag, p);
  TheoryWorkspace ws(s, budget, kind);
  return verify_theory(ws, full_sweep);
}

}  // namespace sylch
