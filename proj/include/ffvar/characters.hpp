#pragma once

// Dirichlet characters modulo a monic Q over F_q[t].
//
// The unit group (F_q[t]/Q)^* is decomposed into a direct product of cyclic
// subgroups <g_1> x ... x <g_r> with orders e_i, and the discrete log of every
// unit is tabulated. A character is a dual tuple (c_1..c_r), 0 <= c_i < e_i,
// with χ(∏ g_i^{x_i}) = exp(2πi Σ c_i x_i / e_i). Values are carried exactly as
// rotation numbers; sums of them can be tested for exact vanishing in the
// cyclotomic ring.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffvar/errors.hpp"
#include "ffvar/field.hpp"
#include "ffvar/poly.hpp"

namespace ffvar {

/// Exact r in [0, 1) standing for exp(2πi r).
class RotationNumber {
 public:
  RotationNumber() = default;
  RotationNumber(std::uint64_t num, std::uint64_t den) {
    require(den >= 1, "rotation denominator must be positive");
    num %= den;
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  friend RotationNumber operator+(const RotationNumber& a, const RotationNumber& b) {
    const std::uint64_t l = std::lcm(a.den_, b.den_);
    return {(a.num_ * (l / a.den_) + b.num_ * (l / b.den_)) % l, l};
  }
  friend RotationNumber operator-(const RotationNumber& a) { return {a.den_ - a.num_, a.den_}; }
  friend bool operator==(const RotationNumber&, const RotationNumber&) = default;

  std::complex<double> value() const {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
    return {std::cos(angle), std::sin(angle)};
  }

  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// Integer coefficients of the L-th cyclotomic polynomial, constant first.
inline std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t L) {
  require(L >= 1, "cyclotomic index must be positive");
  thread_local std::map<std::uint32_t, std::vector<std::int64_t>> memo;
  if (auto it = memo.find(L); it != memo.end()) return it->second;
  std::vector<std::int64_t> num(L + 1, 0);  // x^L - 1
  num[0] = -1;
  num[L] = 1;
  for (std::uint32_t d = 1; d < L; ++d) {
    if (L % d) continue;
    const auto den = cyclotomic_polynomial(d);
    const std::size_t dd = den.size() - 1;
    std::vector<std::int64_t> quot(num.size() - dd, 0);
    for (std::size_t i = num.size() - 1; i + 1 > dd; --i) {
      const std::int64_t c = num[i];
      quot[i - dd] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
      if (i == dd) break;
    }
    num = std::move(quot);
  }
  memo.emplace(L, num);
  return num;
}

/// Σ_k n_k ζ_L^k with integer multiplicities n_k; zero-testing is exact
/// (reduction modulo the L-th cyclotomic polynomial).
class CyclotomicSum {
 public:
  explicit CyclotomicSum(std::uint32_t L) : L_(L), counts_(L, 0) { require(L >= 1, "order must be positive"); }

  void add(std::uint32_t k, std::int64_t mult = 1) { counts_[k % L_] += mult; }
  void add(const RotationNumber& r, std::int64_t mult = 1) {
    require(L_ % r.den() == 0, "rotation denominator does not divide the cyclotomic order");
    add(static_cast<std::uint32_t>(r.num() * (L_ / r.den())), mult);
  }

  bool is_zero() const {
    auto rem = counts_;
    const auto phi = cyclotomic_polynomial(L_);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = rem.size(); i-- > deg;) {
      const std::int64_t c = rem[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= deg; ++j) rem[i - deg + j] -= c * phi[j];
    }
    for (std::size_t i = 0; i < std::min(deg, rem.size()); ++i)
      if (rem[i] != 0) return false;
    return true;
  }

  std::complex<double> value() const {
    std::complex<double> s = 0;
    for (std::uint32_t k = 0; k < L_; ++k)
      if (counts_[k]) s += static_cast<double>(counts_[k]) * RotationNumber(k, L_).value();
    return s;
  }

 private:
  std::uint32_t L_;
  std::vector<std::int64_t> counts_;
};

// ---------------------------------------------------------------------------

class UnitGroupBasis {
 public:
  UnitGroupBasis(const FieldSpec& f, const Poly& Q, std::uint64_t budget = kDefaultBudget)
      : field_(f), modulus_(Q) {
    require(Q.is_monic() && Q.degree() >= 1, "modulus must be monic of degree >= 1");
    t_power_ = Q == Poly::t_power(Q.degree());
    residue_count_ = checked_pow(f.q(), Q.degree());
    require_budget(residue_count_, budget, "unit group of modulus " + to_string(Q));

    unit_.assign(residue_count_, 0);
    for (std::uint64_t c = 1; c < residue_count_; ++c) {
      if (gcd(f, poly_from_code(f, c), Q).is_one()) {
        unit_[c] = 1;
        units_.push_back(c);
      }
    }
    build_basis();
  }

  const FieldSpec& field() const noexcept { return field_; }
  const Poly& modulus() const noexcept { return modulus_; }
  int modulus_degree() const { return modulus_.degree(); }
  std::uint64_t residue_count() const noexcept { return residue_count_; }
  /// Φ(Q), the number of units and of characters.
  std::uint64_t order() const noexcept { return units_.size(); }
  const std::vector<std::uint64_t>& units() const noexcept { return units_; }
  const std::vector<std::uint64_t>& generators() const noexcept { return generators_; }
  const std::vector<std::uint32_t>& orders() const noexcept { return orders_; }
  /// Exponent of the group: lcm of the generator orders.
  std::uint32_t exponent() const noexcept { return exponent_; }

  bool is_unit(std::uint64_t code) const { return unit_.at(code) != 0; }

  /// Exponent tuple x with code = ∏ g_i^{x_i}.
  std::span<const std::uint32_t> dlog(std::uint64_t code) const {
    if (!is_unit(code)) throw PreconditionError("discrete log of a non-unit");
    const std::size_t r = orders_.size();
    return {dlog_.data() + code * r, r};
  }

  /// Code of F mod Q.
  std::uint64_t residue(const Poly& F) const {
    if (t_power_) {
      std::uint64_t code = 0;
      for (int i = std::min(F.length(), modulus_.degree()) - 1; i >= 0; --i) code = code * field_.q() + F[i];
      return code;
    }
    return poly_code(field_, mod(field_, F, modulus_));
  }

  std::uint64_t mul_codes(std::uint64_t a, std::uint64_t b) const {
    return poly_code(field_, mod(field_, mul(field_, poly_from_code(field_, a), poly_from_code(field_, b)), modulus_));
  }

 private:
  // Greedy decomposition: repeatedly adjoin a unit u whose order modulo the
  // current subgroup H is maximal and for which <u> ∩ H = {1}. Such a u always
  // exists while H is a direct factor, and H x <u> is again a direct factor.
  void build_basis() {
    const std::uint64_t phi = units_.size();
    std::vector<std::int64_t> where(residue_count_, -1);  // position in `members`
    std::vector<std::uint64_t> members{1};
    std::vector<std::vector<std::uint32_t>> coords{{}};
    where[1] = 0;

    while (members.size() < phi) {
      std::uint32_t best_order = 0;
      std::uint64_t best = 0;
      for (std::uint64_t u : units_) {
        if (where[u] >= 0) continue;
        std::uint32_t m = 1;
        std::uint64_t v = u;
        while (where[v] < 0) {
          v = mul_codes(v, u);
          ++m;
        }
        if (v == 1 && m > best_order) {
          best_order = m;
          best = u;
        }
      }
      // Check the greedy choice attains the maximal quotient order overall.
      for (std::uint64_t u : units_) {
        if (where[u] >= 0) continue;
        std::uint32_t m = 1;
        std::uint64_t v = u;
        while (where[v] < 0 && m <= best_order) {
          v = mul_codes(v, u);
          ++m;
        }
        if (m > best_order) throw std::logic_error("unit group decomposition failed");
      }

      const std::size_t old = members.size();
      std::uint64_t power = 1;
      for (std::uint32_t j = 1; j < best_order; ++j) {
        power = mul_codes(power, best);
        for (std::size_t i = 0; i < old; ++i) {
          const std::uint64_t e = mul_codes(members[i], power);
          where[e] = static_cast<std::int64_t>(members.size());
          members.push_back(e);
          auto c = coords[i];
          c.push_back(j);
          coords.push_back(std::move(c));
        }
      }
      for (std::size_t i = 0; i < old; ++i) coords[i].push_back(0);
      generators_.push_back(best);
      orders_.push_back(best_order);
    }

    const std::size_t r = orders_.size();
    dlog_.assign(residue_count_ * r, 0);
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < r; ++j) dlog_[members[i] * r + j] = coords[i][j];
    exponent_ = 1;
    for (std::uint32_t e : orders_) exponent_ = std::lcm(exponent_, e);
  }

  FieldSpec field_;
  Poly modulus_;
  bool t_power_ = false;
  std::uint64_t residue_count_ = 0;
  std::vector<std::uint8_t> unit_;
  std::vector<std::uint64_t> units_;
  std::vector<std::uint64_t> generators_;
  std::vector<std::uint32_t> orders_;
  std::uint32_t exponent_ = 1;
  std::vector<std::uint32_t> dlog_;
};

inline std::shared_ptr<const UnitGroupBasis> unit_group_basis(const FieldSpec& f, const Poly& Q,
                                                              std::uint64_t budget = kDefaultBudget) {
  return std::make_shared<const UnitGroupBasis>(f, Q, budget);
}

// ---------------------------------------------------------------------------

class DirichletChar {
 public:
  DirichletChar(std::shared_ptr<const UnitGroupBasis> basis, std::vector<std::uint32_t> dual)
      : basis_(std::move(basis)), dual_(std::move(dual)) {
    require(dual_.size() == basis_->orders().size(), "dual tuple length mismatch");
    principal_ = true;
    for (std::size_t i = 0; i < dual_.size(); ++i) {
      require(dual_[i] < basis_->orders()[i], "dual exponent out of range");
      principal_ = principal_ && dual_[i] == 0;
    }
    const std::uint32_t L = basis_->exponent();
    for (std::size_t i = 0; i < dual_.size(); ++i) step_.push_back(dual_[i] * (L / basis_->orders()[i]));
    even_ = true;
    for (int c = 1; c < basis_->field().q(); ++c) even_ = even_ && rotation_units(static_cast<std::uint64_t>(c)) == 0;
  }

  const UnitGroupBasis& basis() const noexcept { return *basis_; }
  const std::vector<std::uint32_t>& dual() const noexcept { return dual_; }
  bool is_principal() const noexcept { return principal_; }
  /// Trivial on the nonzero constants.
  bool is_even() const noexcept { return even_; }

  /// χ(u) for a unit residue code, as a multiple of 1/exponent.
  std::uint32_t rotation_units(std::uint64_t unit_code) const {
    const auto x = basis_->dlog(unit_code);
    const std::uint64_t L = basis_->exponent();
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<std::uint64_t>(step_[i]) * x[i];
    return static_cast<std::uint32_t>(s % L);
  }

  /// χ(F) as a rotation number, or nullopt when gcd(F, Q) != 1 (χ(F) = 0).
  std::optional<RotationNumber> evaluate(const Poly& F) const {
    const std::uint64_t r = basis_->residue(F);
    if (!basis_->is_unit(r)) return std::nullopt;
    return RotationNumber(rotation_units(r), basis_->exponent());
  }

  /// Per residue code: rotation in units of 1/exponent, or -1 for non-units.
  std::vector<std::int32_t> rotation_table() const {
    std::vector<std::int32_t> t(basis_->residue_count(), -1);
    for (std::uint64_t u : basis_->units()) t[u] = static_cast<std::int32_t>(rotation_units(u));
    return t;
  }

 private:
  std::shared_ptr<const UnitGroupBasis> basis_;
  std::vector<std::uint32_t> dual_;
  std::vector<std::uint32_t> step_;
  bool principal_ = false;
  bool even_ = false;
};

inline std::optional<RotationNumber> evaluate(const DirichletChar& chi, const Poly& F) { return chi.evaluate(F); }
inline bool is_even(const DirichletChar& chi) { return chi.is_even(); }
inline bool is_principal(const DirichletChar& chi) { return chi.is_principal(); }

/// All Φ(Q) characters; the dual tuples run in mixed radix with the first
/// coordinate fastest, so the principal character comes first.
inline std::vector<DirichletChar> enumerate_characters(const std::shared_ptr<const UnitGroupBasis>& basis) {
  std::vector<DirichletChar> out;
  out.reserve(basis->order());
  const auto& orders = basis->orders();
  std::vector<std::uint32_t> dual(orders.size(), 0);
  for (std::uint64_t n = 0; n < basis->order(); ++n) {
    out.emplace_back(basis, dual);
    for (std::size_t i = 0; i < dual.size(); ++i) {
      if (++dual[i] < orders[i]) break;
      dual[i] = 0;
    }
  }
  return out;
}

inline std::vector<DirichletChar> enumerate_even_characters(const std::shared_ptr<const UnitGroupBasis>& basis) {
  std::vector<DirichletChar> out;
  for (auto& chi : enumerate_characters(basis))
    if (chi.is_even()) out.push_back(std::move(chi));
  return out;
}

inline std::uint64_t count_even(const std::shared_ptr<const UnitGroupBasis>& basis) {
  std::uint64_t n = 0;
  for (const auto& chi : enumerate_characters(basis)) n += chi.is_even();
  return n;
}

/// Complex L-th roots of unity, index k -> exp(2πik/L).
inline std::vector<std::complex<double>> roots_of_unity(std::uint32_t L) {
  std::vector<std::complex<double>> r(L);
  for (std::uint32_t k = 0; k < L; ++k) r[k] = RotationNumber(k, L).value();
  return r;
}

}  // namespace ffvar
