#pragma once

// Finite fields F_q, q = p^k, with elements encoded as integers in [0, q).
// The base-p digits of an element are its coordinates in the power basis of
// the defining modulus (lowest power first).

#include <cstdint>
#include <string>
#include <vector>

#include "ffvar/errors.hpp"

namespace ffvar {

using Elem = std::uint8_t;

inline constexpr int kDefaultFieldLimit = 16;
inline constexpr int kMaxFieldSize = 256;

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class FieldSpec {
 public:
  int p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  int q() const noexcept { return q_; }

  /// Base-p digits of the defining modulus, ascending and including the
  /// leading 1. Empty for prime fields.
  const std::vector<int>& modulus() const noexcept { return modulus_; }

  Elem add(Elem a, Elem b) const noexcept { return add_[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const noexcept { return add_[a * q_ + neg_[b]]; }
  Elem mul(Elem a, Elem b) const noexcept { return mul_[a * q_ + b]; }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  /// Multiplicative inverse; a must be nonzero.
  Elem inv(Elem a) const noexcept { return inv_[a]; }

  std::string name() const {
    return k_ == 1 ? "F_" + std::to_string(q_)
                   : "F_" + std::to_string(q_) + "(=" + std::to_string(p_) + "^" +
                         std::to_string(k_) + ")";
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.p_ == b.p_ && a.k_ == b.k_ && a.modulus_ == b.modulus_;
  }

 private:
  friend FieldSpec make_field(int p, int k, int limit);

  int p_ = 0;
  int k_ = 0;
  int q_ = 0;
  std::vector<int> modulus_;
  std::vector<Elem> add_, mul_, neg_, inv_;
};

namespace detail {

// Polynomials over F_p as digit vectors, used only to build extension fields.
inline std::vector<int> fp_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                                  const std::vector<int>& mod, int p) {
  const int k = static_cast<int>(mod.size()) - 1;
  std::vector<int> prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (int i = static_cast<int>(prod.size()) - 1; i >= k; --i) {
    const int c = prod[i];
    if (c == 0) continue;
    for (int j = 0; j <= k; ++j) prod[i - k + j] = ((prod[i - k + j] - c * mod[j]) % p + p) % p;
  }
  prod.resize(k);
  return prod;
}

inline std::vector<int> to_digits(int x, int p, int k) {
  std::vector<int> d(k);
  for (int i = 0; i < k; ++i, x /= p) d[i] = x % p;
  return d;
}

inline int from_digits(const std::vector<int>& d, int p) {
  int x = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) x = x * p + d[i];
  return x;
}

// A degree-k monic polynomial over F_p is irreducible iff it has no monic
// factor of degree 1..k/2; checked by brute-force division.
inline bool fp_irreducible(const std::vector<int>& f, int p) {
  const int k = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= k; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int code = 0; code < count; ++code) {
      std::vector<int> g = to_digits(code, p, d);
      g.push_back(1);
      std::vector<int> r = f;
      for (int i = k; i >= d; --i) {
        const int c = r[i];
        if (c == 0) continue;
        for (int j = 0; j <= d; ++j) r[i - d + j] = ((r[i - d + j] - c * g[j]) % p + p) % p;
      }
      bool zero = true;
      for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Builds F_{p^k}. For k > 1 the modulus is the smallest monic irreducible of
/// degree k over F_p, comparing coefficient tuples (c_0, c_1, ...) from the
/// constant term upward.
inline FieldSpec make_field(int p, int k, int limit = kDefaultFieldLimit) {
  require(is_prime(p), "field characteristic " + std::to_string(p) + " is not prime");
  require(k >= 1, "extension degree must be >= 1");
  require(limit <= kMaxFieldSize, "field size limit above " + std::to_string(kMaxFieldSize));
  int q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    require(q <= limit, "field size " + std::to_string(p) + "^" + std::to_string(k) +
                            " exceeds limit " + std::to_string(limit));
  }

  FieldSpec f;
  f.p_ = p;
  f.k_ = k;
  f.q_ = q;
  if (k > 1) {
    // Candidates ordered by (c_0, ..., c_{k-1}) lexicographically: iterate the
    // code with c_0 as the most significant digit.
    for (int code = 0; code < q && f.modulus_.empty(); ++code) {
      std::vector<int> cand(k + 1);
      int x = code;
      for (int i = k - 1; i >= 0; --i, x /= p) cand[i] = x % p;
      cand[k] = 1;
      if (detail::fp_irreducible(cand, p)) f.modulus_ = cand;
    }
  }

  const std::size_t n = static_cast<std::size_t>(q) * q;
  f.add_.resize(n);
  f.mul_.resize(n);
  f.neg_.resize(q);
  f.inv_.assign(q, 0);
  for (int a = 0; a < q; ++a) {
    const auto da = detail::to_digits(a, p, k);
    for (int b = 0; b < q; ++b) {
      const auto db = detail::to_digits(b, p, k);
      std::vector<int> s(k);
      for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
      f.add_[a * q + b] = static_cast<Elem>(detail::from_digits(s, p));
      f.mul_[a * q + b] =
          k == 1 ? static_cast<Elem>(a * b % p)
                 : static_cast<Elem>(detail::from_digits(detail::fp_mulmod(da, db, f.modulus_, p), p));
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (f.add_[a * q + b] == 0) f.neg_[a] = static_cast<Elem>(b);
      if (f.mul_[a * q + b] == 1) f.inv_[a] = static_cast<Elem>(b);
    }
  }
  return f;
}

/// Exhaustive check of the field axioms on the arithmetic tables.
inline bool check_field_axioms(const FieldSpec& f) {
  const int q = f.q();
  for (int a = 0; a < q; ++a) {
    const Elem ea = static_cast<Elem>(a);
    if (f.add(ea, 0) != ea || f.mul(ea, 1) != ea || f.add(ea, f.neg(ea)) != 0) return false;
    if (a != 0 && f.mul(ea, f.inv(ea)) != 1) return false;
    for (int b = 0; b < q; ++b) {
      const Elem eb = static_cast<Elem>(b);
      if (f.add(ea, eb) != f.add(eb, ea) || f.mul(ea, eb) != f.mul(eb, ea)) return false;
      for (int c = 0; c < q; ++c) {
        const Elem ec = static_cast<Elem>(c);
        if (f.add(f.add(ea, eb), ec) != f.add(ea, f.add(eb, ec))) return false;
        if (f.mul(f.mul(ea, eb), ec) != f.mul(ea, f.mul(eb, ec))) return false;
        if (f.mul(ea, f.add(eb, ec)) != f.add(f.mul(ea, eb), f.mul(ea, ec))) return false;
      }
    }
  }
  return true;
}

}  // namespace ffvar
