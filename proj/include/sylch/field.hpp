#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sylch {

inline bool is_prime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline void require_odd_prime(uint32_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("modulus must be an odd prime >= 3, got " + std::to_string(p));
}

/// Residue modulo a fixed odd prime.  Mixing values with different moduli is a
/// programming error and throws.
class Fp {
 public:
  Fp(int64_t v, uint32_t p) : p_(p) {
    require_odd_prime(p);
    int64_t r = v % static_cast<int64_t>(p);
    if (r < 0) r += p;
    v_ = static_cast<uint32_t>(r);
  }

  uint32_t val() const { return v_; }
  uint32_t modulus() const { return p_; }

  Fp operator+(const Fp& o) const { return raw((v_ + check(o).v_) % p_, p_); }
  Fp operator-(const Fp& o) const { return raw((v_ + p_ - check(o).v_) % p_, p_); }
  Fp operator*(const Fp& o) const {
    return raw(static_cast<uint32_t>(uint64_t(v_) * check(o).v_ % p_), p_);
  }
  Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }

  Fp pow(uint64_t e) const {
    uint64_t b = v_, acc = 1;
    while (e) {
      if (e & 1) acc = acc * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return raw(static_cast<uint32_t>(acc), p_);
  }

  Fp inv() const {
    if (v_ == 0) throw std::domain_error("inverse of zero in F_p");
    return pow(p_ - 2);
  }

  Fp operator/(const Fp& o) const { return *this * check(o).inv(); }

  bool operator==(const Fp& o) const { return p_ == o.p_ && v_ == o.v_; }
  bool operator!=(const Fp& o) const { return !(*this == o); }
  bool is_zero() const { return v_ == 0; }

  static Fp raw(uint32_t v, uint32_t p) {
    Fp f;
    f.v_ = v;
    f.p_ = p;
    return f;
  }

 private:
  Fp() : v_(0), p_(0) {}
  const Fp& check(const Fp& o) const {
    if (o.p_ != p_) throw std::logic_error("F_p arithmetic across different moduli");
    return o;
  }
  uint32_t v_;
  uint32_t p_;
};

inline Fp inv2(uint32_t p) { return Fp((p + 1) / 2, p); }  // (p+1)/2 * 2 = p+1 = 1

/// Element of Z[zeta] for zeta a primitive p-th root of unity, stored as
/// integer coefficients of 1, zeta, ..., zeta^{p-1} with the canonical
/// normalization c[p-1] == 0 (using 1 + zeta + ... + zeta^{p-1} = 0).
/// Equality of canonical forms is exact equality in Z[zeta].
class CycInt {
 public:
  explicit CycInt(uint32_t p) : p_(p), c_(p, 0) { require_odd_prime(p); }

  static CycInt zero(uint32_t p) { return CycInt(p); }

  static CycInt from_int(uint32_t p, int64_t k) {
    CycInt z(p);
    z.c_[0] = k;
    return z;
  }

  static CycInt zeta_pow(uint32_t p, uint32_t t) {
    CycInt z(p);
    z.c_[t % p] = 1;
    z.canonicalize();
    return z;
  }

  uint32_t zeta_order() const { return p_; }
  const std::vector<int64_t>& coeffs() const { return c_; }

  CycInt operator+(const CycInt& o) const {
    CycInt r = *this;
    for (uint32_t i = 0; i < p_; ++i) r.c_[i] += check(o).c_[i];
    r.canonicalize();
    return r;
  }

  CycInt operator-(const CycInt& o) const {
    CycInt r = *this;
    for (uint32_t i = 0; i < p_; ++i) r.c_[i] -= check(o).c_[i];
    r.canonicalize();
    return r;
  }

  CycInt operator-() const {
    CycInt r(p_);
    for (uint32_t i = 0; i < p_; ++i) r.c_[i] = -c_[i];
    r.canonicalize();
    return r;
  }

  CycInt operator*(const CycInt& o) const {
    check(o);
    CycInt r(p_);
    for (uint32_t i = 0; i < p_; ++i) {
      if (c_[i] == 0) continue;
      for (uint32_t j = 0; j < p_; ++j) {
        if (o.c_[j] == 0) continue;
        r.c_[(i + j) % p_] += c_[i] * o.c_[j];
      }
    }
    r.canonicalize();
    return r;
  }

  CycInt scaled(int64_t k) const {
    CycInt r = *this;
    for (auto& v : r.c_) v *= k;
    r.canonicalize();
    return r;
  }

  /// Exact division by a nonzero integer; throws if any coefficient is not divisible.
  CycInt div_exact(int64_t k) const {
    if (k == 0) throw std::domain_error("division by zero");
    CycInt r = *this;
    for (auto& v : r.c_) {
      if (v % k != 0) throw std::domain_error("inexact cyclotomic division");
      v /= k;
    }
    return r;  // canonical already: dividing a canonical form keeps c[p-1] == 0
  }

  /// Complex conjugation: zeta^t -> zeta^{p-t}.
  CycInt conj() const {
    CycInt r(p_);
    for (uint32_t i = 0; i < p_; ++i) r.c_[(p_ - i) % p_] += c_[i];
    r.canonicalize();
    return r;
  }

  bool is_zero() const {
    for (auto v : c_)
      if (v != 0) return false;
    return true;
  }

  bool is_rational_integer() const {
    for (uint32_t i = 1; i < p_; ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  int64_t as_rational_integer() const {
    if (!is_rational_integer()) throw std::domain_error("not a rational integer");
    return c_[0];
  }

  bool operator==(const CycInt& o) const { return p_ == o.p_ && c_ == o.c_; }
  bool operator!=(const CycInt& o) const { return !(*this == o); }

  std::string str() const {
    std::string s;
    for (uint32_t i = 0; i + 1 < p_; ++i) {
      if (i) s += "+";
      s += std::to_string(c_[i]);
      if (i == 1) s += "*z";
      if (i > 1) s += "*z^" + std::to_string(i);
    }
    return s;
  }

 private:
  const CycInt& check(const CycInt& o) const {
    if (o.p_ != p_) throw std::logic_error("cyclotomic arithmetic across different orders");
    return o;
  }
  void canonicalize() {
    int64_t t = c_[p_ - 1];
    if (t == 0) return;
    for (auto& v : c_) v -= t;
  }
  uint32_t p_;
  std::vector<int64_t> c_;
};

/// Additive character value: eps(t) = zeta^t.
inline CycInt eps(const Fp& t) { return CycInt::zeta_pow(t.modulus(), t.val()); }

}  // namespace sylch
