#pragma once

// Dense polynomials over a small finite field, stored inline with a fixed
// coefficient capacity. Arithmetic is exposed as free functions that take the
// field explicitly so that Poly stays a plain value type.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ffvar/errors.hpp"
#include "ffvar/field.hpp"

namespace ffvar {

class Poly {
 public:
  static constexpr int kCapacity = 64;

  Poly() = default;  // the zero polynomial

  /// Coefficients lowest degree first; trailing zeros are dropped.
  Poly(std::initializer_list<int> coeffs) {
    require(coeffs.size() <= kCapacity, "polynomial exceeds capacity");
    for (int c : coeffs) c_[len_++] = static_cast<Elem>(c);
    trim();
  }

  static Poly from_coeffs(std::span<const Elem> coeffs) {
    require(coeffs.size() <= kCapacity, "polynomial exceeds capacity");
    Poly r;
    std::copy(coeffs.begin(), coeffs.end(), r.c_.begin());
    r.len_ = static_cast<std::uint8_t>(coeffs.size());
    r.trim();
    return r;
  }

  static Poly constant(Elem c) {
    Poly r;
    if (c != 0) {
      r.c_[0] = c;
      r.len_ = 1;
    }
    return r;
  }

  /// The monomial t^n.
  static Poly t_power(int n) {
    require(n >= 0 && n < kCapacity, "monomial degree out of range");
    Poly r;
    r.c_[n] = 1;
    r.len_ = static_cast<std::uint8_t>(n + 1);
    return r;
  }

  bool is_zero() const noexcept { return len_ == 0; }

  /// Degree of a nonzero polynomial. The zero polynomial has no degree.
  int degree() const {
    if (len_ == 0) throw PreconditionError("degree of the zero polynomial");
    return len_ - 1;
  }

  /// Number of stored coefficients (degree + 1, or 0 for zero).
  int length() const noexcept { return len_; }

  Elem operator[](int i) const noexcept { return i >= 0 && i < len_ ? c_[i] : Elem{0}; }
  Elem lead() const noexcept { return len_ ? c_[len_ - 1] : Elem{0}; }
  bool is_monic() const noexcept { return lead() == 1; }
  bool is_one() const noexcept { return len_ == 1 && c_[0] == 1; }

  std::span<const Elem> coeffs() const noexcept { return {c_.data(), len_}; }

  void set(int i, Elem v) {
    require(i >= 0 && i < kCapacity, "coefficient index out of range");
    if (i >= len_) {
      if (v == 0) return;
      std::fill(c_.begin() + len_, c_.begin() + i, Elem{0});
      len_ = static_cast<std::uint8_t>(i + 1);
    }
    c_[i] = v;
    trim();
  }

  friend bool operator==(const Poly& a, const Poly& b) noexcept {
    return a.len_ == b.len_ && std::equal(a.c_.begin(), a.c_.begin() + a.len_, b.c_.begin());
  }

  /// Orders by degree, then by coefficients from the top down, so that within
  /// a degree the constant term varies fastest.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) noexcept {
    if (a.len_ != b.len_) return a.len_ <=> b.len_;
    for (int i = a.len_ - 1; i >= 0; --i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    return std::strong_ordering::equal;
  }

 private:
  friend Poly add(const FieldSpec&, const Poly&, const Poly&);
  friend Poly sub(const FieldSpec&, const Poly&, const Poly&);
  friend Poly mul(const FieldSpec&, const Poly&, const Poly&);
  friend Poly scale(const FieldSpec&, const Poly&, Elem);
  friend std::pair<Poly, Poly> divmod(const FieldSpec&, const Poly&, const Poly&);
  friend Poly star(const Poly&);
  friend class MonicIterator;

  void trim() noexcept {
    while (len_ > 0 && c_[len_ - 1] == 0) --len_;
  }

  std::array<Elem, kCapacity> c_{};
  std::uint8_t len_ = 0;
};

// ---------------------------------------------------------------------------
// Ring arithmetic

inline Poly add(const FieldSpec& f, const Poly& a, const Poly& b) {
  Poly r;
  const int n = std::max(a.len_, b.len_);
  for (int i = 0; i < n; ++i) r.c_[i] = f.add(a[i], b[i]);
  r.len_ = static_cast<std::uint8_t>(n);
  r.trim();
  return r;
}

inline Poly sub(const FieldSpec& f, const Poly& a, const Poly& b) {
  Poly r;
  const int n = std::max(a.len_, b.len_);
  for (int i = 0; i < n; ++i) r.c_[i] = f.sub(a[i], b[i]);
  r.len_ = static_cast<std::uint8_t>(n);
  r.trim();
  return r;
}

inline Poly scale(const FieldSpec& f, const Poly& a, Elem c) {
  Poly r;
  if (c == 0) return r;
  for (int i = 0; i < a.len_; ++i) r.c_[i] = f.mul(a.c_[i], c);
  r.len_ = a.len_;
  return r;
}

inline Poly mul(const FieldSpec& f, const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  const int n = a.len_ + b.len_ - 1;
  require(n <= Poly::kCapacity, "product degree exceeds polynomial capacity");
  for (int i = 0; i < a.len_; ++i) {
    const Elem ai = a.c_[i];
    if (ai == 0) continue;
    for (int j = 0; j < b.len_; ++j) r.c_[i + j] = f.add(r.c_[i + j], f.mul(ai, b.c_[j]));
  }
  r.len_ = static_cast<std::uint8_t>(n);
  r.trim();
  return r;
}

/// Returns (s, r) with a = s*b + r and r = 0 or deg r < deg b.
inline std::pair<Poly, Poly> divmod(const FieldSpec& f, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw PreconditionError("division by the zero polynomial");
  Poly quot;
  Poly rem = a;
  const int db = b.len_ - 1;
  if (rem.len_ <= db) return {quot, rem};
  const Elem inv_lead = f.inv(b.lead());
  quot.len_ = static_cast<std::uint8_t>(rem.len_ - db);
  for (int i = rem.len_ - 1; i >= db; --i) {
    const Elem c = f.mul(rem.c_[i], inv_lead);
    quot.c_[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem.c_[i - db + j] = f.sub(rem.c_[i - db + j], f.mul(c, b.c_[j]));
  }
  rem.len_ = static_cast<std::uint8_t>(db);
  rem.trim();
  quot.trim();
  return {quot, rem};
}

inline Poly mod(const FieldSpec& f, const Poly& a, const Poly& b) { return divmod(f, a, b).second; }

inline Poly make_monic(const FieldSpec& f, const Poly& a) {
  if (a.is_zero()) throw PreconditionError("cannot normalise the zero polynomial");
  return scale(f, a, f.inv(a.lead()));
}

/// Monic greatest common divisor; gcd(0, 0) is rejected.
inline Poly gcd(const FieldSpec& f, Poly a, Poly b) {
  if (a.is_zero() && b.is_zero()) throw PreconditionError("gcd of two zero polynomials");
  while (!b.is_zero()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(f, a);
}

inline Poly pow(const FieldSpec& f, const Poly& a, int e) {
  Poly r = Poly::constant(1);
  for (int i = 0; i < e; ++i) r = mul(f, r, a);
  return r;
}

/// Multiplicity of t as a factor of a nonzero polynomial.
inline int t_valuation(const Poly& a) {
  if (a.is_zero()) throw PreconditionError("t-valuation of the zero polynomial");
  int v = 0;
  while (a[v] == 0) ++v;
  return v;
}

/// F*(t) = t^deg(F) F(1/t): the coefficient reversal. Its degree drops by the
/// multiplicity of t in F.
inline Poly star(const Poly& a) {
  if (a.is_zero()) throw PreconditionError("involution of the zero polynomial");
  Poly r;
  const int n = a.len_;
  for (int i = 0; i < n; ++i) r.c_[i] = a.c_[n - 1 - i];
  r.len_ = a.len_;
  r.trim();
  return r;
}

// ---------------------------------------------------------------------------
// Integer encodings

/// Σ c_i q^i over all coefficients. Used for residues modulo a fixed modulus.
inline std::uint64_t poly_code(const FieldSpec& f, const Poly& a) {
  std::uint64_t code = 0;
  for (int i = a.length() - 1; i >= 0; --i) code = code * f.q() + a[i];
  return code;
}

inline Poly poly_from_code(const FieldSpec& f, std::uint64_t code) {
  Poly r;
  for (int i = 0; code != 0; ++i, code /= f.q()) r.set(i, static_cast<Elem>(code % f.q()));
  return r;
}

/// Position of a monic polynomial within enumerate_monic(deg): the
/// coefficients below the leading one read as base-q digits, constant first.
inline std::uint64_t monic_index(const FieldSpec& f, const Poly& g) {
  require(g.is_monic(), "monic_index needs a monic polynomial");
  std::uint64_t idx = 0;
  for (int i = g.degree() - 1; i >= 0; --i) idx = idx * f.q() + g[i];
  return idx;
}

inline Poly monic_from_index(const FieldSpec& f, int n, std::uint64_t idx) {
  Poly r = Poly::t_power(n);
  for (int i = 0; i < n; ++i, idx /= f.q()) r.set(i, static_cast<Elem>(idx % f.q()));
  return r;
}

// ---------------------------------------------------------------------------
// Enumeration of M_n

class MonicIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = Poly;
  using difference_type = std::ptrdiff_t;
  using reference = const Poly&;
  using pointer = const Poly*;

  MonicIterator() = default;
  MonicIterator(const FieldSpec* f, int n, std::uint64_t idx)
      : f_(f), n_(n), idx_(idx), cur_(monic_from_index(*f, n, idx)) {}

  const Poly& operator*() const noexcept { return cur_; }
  const Poly* operator->() const noexcept { return &cur_; }
  std::uint64_t index() const noexcept { return idx_; }

  MonicIterator& operator++() noexcept {
    ++idx_;
    const Elem top = static_cast<Elem>(f_->q() - 1);
    for (int i = 0; i < n_; ++i) {
      if (cur_.c_[i] != top) {
        ++cur_.c_[i];
        return *this;
      }
      cur_.c_[i] = 0;
    }
    return *this;
  }
  void operator++(int) noexcept { ++*this; }

  friend bool operator==(const MonicIterator& a, const MonicIterator& b) noexcept {
    return a.idx_ == b.idx_;
  }

 private:
  const FieldSpec* f_ = nullptr;
  int n_ = 0;
  std::uint64_t idx_ = 0;
  Poly cur_;
};

/// The monic polynomials of degree n with index in [first, last), in
/// enumeration order (constant term fastest). A contiguous index block fixes a
/// prefix of the top coefficients, so ranges split cleanly for parallel use.
class MonicRange {
 public:
  MonicRange(const FieldSpec& f, int n, std::uint64_t first, std::uint64_t last)
      : f_(&f), n_(n), first_(first), last_(last) {}

  MonicIterator begin() const { return {f_, n_, first_}; }
  MonicIterator end() const { return {f_, n_, last_}; }
  std::uint64_t size() const noexcept { return last_ - first_; }
  int degree() const noexcept { return n_; }
  std::uint64_t first_index() const noexcept { return first_; }

  /// Splits into at most `parts` contiguous sub-ranges covering this one.
  std::vector<MonicRange> split(std::size_t parts) const {
    std::vector<MonicRange> out;
    if (parts == 0) parts = 1;
    const std::uint64_t total = size();
    std::uint64_t start = first_;
    for (std::size_t i = 0; i < parts; ++i) {
      const std::uint64_t stop = first_ + total * (i + 1) / parts;
      if (stop > start) out.emplace_back(*f_, n_, start, stop);
      start = stop;
    }
    return out;
  }

 private:
  const FieldSpec* f_;
  int n_;
  std::uint64_t first_;
  std::uint64_t last_;
};

inline MonicRange enumerate_monic(const FieldSpec& f, int n, std::uint64_t budget = kDefaultBudget) {
  require(n >= 0, "degree must be non-negative");
  const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(f.q()), n);
  require_budget(count, budget, "enumerate_monic");
  return {f, n, 0, count};
}

// ---------------------------------------------------------------------------
// Short intervals

/// Identifies I_h(G) for monic G of degree N: the coefficients of
/// t^{h+1}..t^{N-1}, packed base q with the lowest of them least significant.
struct IntervalKey {
  std::uint64_t key = 0;
  int N = 0;
  int h = 0;
  friend bool operator==(const IntervalKey&, const IntervalKey&) = default;
};

inline IntervalKey interval_key(const FieldSpec& f, const Poly& g, int h) {
  require(g.is_monic(), "interval_key needs a monic polynomial");
  const int n = g.degree();
  if (h < 0 || h >= n) throw PreconditionError("interval_key needs 0 <= h < deg G");
  std::uint64_t key = 0;
  for (int i = n - 1; i > h; --i) key = key * f.q() + g[i];
  return {key, n, h};
}

/// Key of the interval containing the monic polynomial with the given
/// enumeration index.
inline std::uint64_t interval_key_of_index(std::uint64_t idx, std::uint64_t interval_size) {
  return idx / interval_size;
}

// ---------------------------------------------------------------------------
// Formatting

/// Human form, e.g. "t^3+t+1" or "2t^2+1"; coefficients are element codes.
inline std::string to_string(const Poly& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (int i = a.length() - 1; i >= 0; --i) {
    const int c = a[i];
    if (c == 0) continue;
    if (!s.empty()) s += '+';
    if (i == 0) {
      s += std::to_string(c);
      continue;
    }
    if (c != 1) s += std::to_string(c);
    s += 't';
    if (i > 1) s += '^' + std::to_string(i);
  }
  return s;
}

/// Machine form: ascending coefficient list, e.g. "[1,1,0,1]".
inline std::string to_coeff_list(const Poly& a) {
  std::string s = "[";
  for (int i = 0; i < a.length(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s + "]";
}

}  // namespace ffvar
