#pragma once

// Factorisation and the classical arithmetic functions on F_q[t]:
// λ, μ, ω, Ω, φ, Λ, ω restricted to a degree window, smoothness, and exact
// counts of h-smooth polynomials.
//
// Two routes are provided. Pointwise functions factor by trial division
// against a SieveCache. FactorTable precomputes a smallest-prime-factor chain
// for every monic polynomial up to a degree bound, which the enumeration-heavy
// engines use.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffvar/errors.hpp"
#include "ffvar/field.hpp"
#include "ffvar/poly.hpp"
#include "ffvar/sieve.hpp"

namespace ffvar {

using BigInt = boost::multiprecision::cpp_int;

struct Factorization {
  Elem unit = 1;
  /// (monic irreducible, multiplicity), ascending in (degree, enumeration order).
  std::vector<std::pair<Poly, int>> factors;

  Poly product(const FieldSpec& f) const {
    Poly r = Poly::constant(unit);
    for (const auto& [p, e] : factors) r = mul(f, r, pow(f, p, e));
    return r;
  }
};

/// Trial division by the cached irreducibles in increasing degree. A leftover
/// cofactor of degree > 1 has no factor of degree <= half its degree and is
/// therefore irreducible.
inline Factorization factor(const SieveCache& cache, const Poly& F) {
  if (F.is_zero()) throw PreconditionError("cannot factor the zero polynomial");
  const FieldSpec& f = cache.field;
  if (cache.max_degree < F.degree() / 2)
    throw PreconditionError("sieve depth " + std::to_string(cache.max_degree) +
                            " is insufficient to factor degree " + std::to_string(F.degree()));
  Factorization out;
  out.unit = F.lead();
  Poly rest = make_monic(f, F);
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const Poly& p : cache.by_degree[d]) {
      if (2 * d > rest.degree()) break;
      int e = 0;
      for (;;) {
        auto [s, r] = divmod(f, rest, p);
        if (!r.is_zero()) break;
        rest = s;
        ++e;
      }
      if (e) out.factors.emplace_back(p, e);
    }
  }
  if (rest.degree() > 0) {
    out.factors.emplace_back(rest, 1);
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return out;
}

inline int big_omega(const Factorization& fz) {
  int n = 0;
  for (const auto& pe : fz.factors) n += pe.second;
  return n;
}

inline int omega(const Factorization& fz) { return static_cast<int>(fz.factors.size()); }

inline int liouville(const Factorization& fz) { return big_omega(fz) % 2 ? -1 : 1; }

inline int moebius(const Factorization& fz) {
  for (const auto& pe : fz.factors)
    if (pe.second > 1) return 0;
  return omega(fz) % 2 ? -1 : 1;
}

/// |(F_q[t]/F)^*| = ∏ q^{d(e-1)} (q^d - 1). Throws std::overflow_error beyond 64 bits.
inline std::uint64_t euler_phi(const FieldSpec& f, const Factorization& fz) {
  std::uint64_t r = 1;
  for (const auto& [p, e] : fz.factors) {
    const int d = p.degree();
    r = checked_mul(r, checked_pow(f.q(), d * (e - 1)));
    r = checked_mul(r, checked_pow(f.q(), d) - 1);
  }
  return r;
}

/// deg P if the factorisation is P^k with k >= 1, else 0.
inline int von_mangoldt(const Factorization& fz) {
  return fz.factors.size() == 1 ? fz.factors.front().first.degree() : 0;
}

/// Distinct irreducible divisors with degree in the half-open window (lo, hi].
inline int omega_in_range(const Factorization& fz, int lo, int hi) {
  require(lo <= hi, "omega_in_range needs lo <= hi");
  int n = 0;
  for (const auto& pe : fz.factors) {
    const int d = pe.first.degree();
    n += (d > lo && d <= hi);
  }
  return n;
}

inline bool is_smooth(const Factorization& fz, int h) {
  return std::all_of(fz.factors.begin(), fz.factors.end(),
                     [h](const auto& pe) { return pe.first.degree() <= h; });
}

inline int liouville(const SieveCache& c, const Poly& F) { return liouville(factor(c, F)); }
inline int moebius(const SieveCache& c, const Poly& F) { return moebius(factor(c, F)); }
inline int omega(const SieveCache& c, const Poly& F) { return omega(factor(c, F)); }
inline int big_omega(const SieveCache& c, const Poly& F) { return big_omega(factor(c, F)); }
inline std::uint64_t euler_phi(const SieveCache& c, const Poly& F) { return euler_phi(c.field, factor(c, F)); }
inline int von_mangoldt(const SieveCache& c, const Poly& F) { return von_mangoldt(factor(c, F)); }
inline int omega_in_range(const SieveCache& c, const Poly& F, int lo, int hi) {
  return omega_in_range(factor(c, F), lo, hi);
}
inline bool is_smooth(const SieveCache& c, const Poly& F, int h) { return is_smooth(factor(c, F), h); }

// ---------------------------------------------------------------------------

/// Smallest-prime-factor chains for every monic polynomial of degree
/// <= max_degree, plus dense λ, μ and largest-prime-degree arrays.
/// Immutable after construction.
class FactorTable {
 public:
  FactorTable(const SieveCache& sieve, int max_degree, std::uint64_t budget = kDefaultBudget)
      : field_(sieve.field), max_degree_(max_degree) {
    require(max_degree >= 0, "FactorTable needs max_degree >= 0");
    require(sieve.max_degree >= max_degree, "sieve does not reach the table degree");
    const FieldSpec& f = field_;
    prime_offset_.assign(max_degree + 2, 0);
    for (int d = 1; d <= max_degree; ++d) {
      prime_offset_[d + 1] = prime_offset_[d] + static_cast<std::uint32_t>(sieve.by_degree[d].size());
      for (const Poly& p : sieve.by_degree[d]) primes_.push_back(p);
    }
    prime_offset_[0] = 0;

    entries_.resize(max_degree + 1);
    lambda_.resize(max_degree + 1);
    mu_.resize(max_degree + 1);
    top_degree_.resize(max_degree + 1);
    entries_[0] = {Entry{kNone, 0}};
    lambda_[0] = {1};
    mu_[0] = {1};
    top_degree_[0] = {0};

    for (int n = 1; n <= max_degree; ++n) {
      const std::uint64_t count = checked_pow(f.q(), n);
      require_budget(count, budget, "FactorTable degree " + std::to_string(n));
      auto& ent = entries_[n];
      ent.assign(count, Entry{kNone, 0});
      for (int d = 1; 2 * d <= n; ++d) {
        for (std::uint32_t id = prime_offset_[d]; id < prime_offset_[d + 1]; ++id) {
          const MonicRange cofactors = enumerate_monic(f, n - d, budget);
          for (auto it = cofactors.begin(); it != cofactors.end(); ++it) {
            Entry& e = ent[monic_index(f, mul(f, primes_[id], *it))];
            if (e.prime == kNone) e = Entry{id, static_cast<std::uint32_t>(it.index())};
          }
        }
      }
      for (std::uint32_t id = prime_offset_[n]; id < prime_offset_[n + 1]; ++id) {
        Entry& e = ent[monic_index(f, primes_[id])];
        if (e.prime != kNone) throw std::logic_error("sieve lists a reducible polynomial");
        e = Entry{id, 0};
      }
      auto& lam = lambda_[n];
      auto& mu = mu_[n];
      auto& top = top_degree_[n];
      lam.resize(count);
      mu.resize(count);
      top.resize(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        const Entry e = ent[i];
        if (e.prime == kNone) throw std::logic_error("sieve is missing an irreducible");
        const int d = prime_degree(e.prime);
        const int rest = n - d;
        lam[i] = static_cast<std::int8_t>(-lambda_[rest][e.cofactor]);
        const bool repeated = rest > 0 && entries_[rest][e.cofactor].prime == e.prime;
        mu[i] = repeated ? std::int8_t{0} : static_cast<std::int8_t>(-mu_[rest][e.cofactor]);
        top[i] = static_cast<std::uint8_t>(std::max<int>(d, top_degree_[rest][e.cofactor]));
      }
    }
  }

  const FieldSpec& field() const noexcept { return field_; }
  int max_degree() const noexcept { return max_degree_; }

  std::span<const Poly> primes(int d) const {
    check_degree(d);
    if (d == 0) return {};
    return {primes_.data() + prime_offset_[d], primes_.data() + prime_offset_[d + 1]};
  }

  std::uint64_t count(int n) const {
    check_degree(n);
    return entries_[n].size();
  }

  /// Test hook: negates the stored λ value of one entry.
  void flip_liouville(int n, std::uint64_t idx) {
    check_degree(n);
    lambda_[n].at(idx) = static_cast<std::int8_t>(-lambda_[n][idx]);
  }

  std::span<const std::int8_t> liouville_values(int n) const {
    check_degree(n);
    return lambda_[n];
  }
  std::span<const std::int8_t> moebius_values(int n) const {
    check_degree(n);
    return mu_[n];
  }

  int liouville(int n, std::uint64_t idx) const { return lambda_.at(n).at(idx); }
  int moebius(int n, std::uint64_t idx) const { return mu_.at(n).at(idx); }
  /// Largest degree of an irreducible factor (0 for the constant 1).
  int largest_prime_degree(int n, std::uint64_t idx) const { return top_degree_.at(n).at(idx); }
  bool is_smooth(int n, std::uint64_t idx, int h) const { return largest_prime_degree(n, idx) <= h; }

  /// Distinct prime ids along the chain, ascending, with multiplicities.
  std::vector<std::pair<std::uint32_t, int>> prime_ids(int n, std::uint64_t idx) const {
    std::vector<std::pair<std::uint32_t, int>> out;
    while (n > 0) {
      const Entry e = entries_.at(n).at(idx);
      if (!out.empty() && out.back().first == e.prime)
        ++out.back().second;
      else
        out.emplace_back(e.prime, 1);
      n -= prime_degree(e.prime);
      idx = e.cofactor;
    }
    return out;
  }

  Factorization factorization(int n, std::uint64_t idx) const {
    Factorization fz;
    for (const auto& [id, e] : prime_ids(n, idx)) fz.factors.emplace_back(primes_[id], e);
    return fz;
  }

  int omega_in_range(int n, std::uint64_t idx, int lo, int hi) const {
    require(lo <= hi, "omega_in_range needs lo <= hi");
    int c = 0;
    for (const auto& pe : prime_ids(n, idx)) {
      const int d = prime_degree(pe.first);
      c += (d > lo && d <= hi);
    }
    return c;
  }

  int von_mangoldt(int n, std::uint64_t idx) const {
    const auto ids = prime_ids(n, idx);
    return ids.size() == 1 ? prime_degree(ids.front().first) : 0;
  }

  /// (degree, enumeration index) of F made monic. The normalisation is
  /// harmless for the even functions looked up here.
  std::pair<int, std::uint64_t> locate(const Poly& F) const {
    if (F.is_zero()) throw PreconditionError("arithmetic function of the zero polynomial");
    const Poly m = make_monic(field_, F);
    check_degree(m.degree());
    return {m.degree(), monic_index(field_, m)};
  }

  int liouville(const Poly& F) const {
    const auto [n, i] = locate(F);
    return liouville(n, i);
  }
  int moebius(const Poly& F) const {
    const auto [n, i] = locate(F);
    return moebius(n, i);
  }
  Factorization factorization(const Poly& F) const {
    const auto [n, i] = locate(F);
    Factorization fz = factorization(n, i);
    fz.unit = F.lead();
    return fz;
  }

  int prime_degree(std::uint32_t id) const {
    const auto it = std::upper_bound(prime_offset_.begin(), prime_offset_.end(), id);
    return static_cast<int>(it - prime_offset_.begin()) - 1;
  }

 private:
  struct Entry {
    std::uint32_t prime;     // smallest prime factor id, kNone for the constant 1
    std::uint32_t cofactor;  // enumeration index of G / prime
  };
  static constexpr std::uint32_t kNone = 0xffffffffu;

  void check_degree(int n) const {
    require(n >= 0 && n <= max_degree_, "degree " + std::to_string(n) + " outside FactorTable");
  }

  FieldSpec field_;
  int max_degree_;
  std::vector<Poly> primes_;
  std::vector<std::uint32_t> prime_offset_;  // primes of degree d are [offset[d], offset[d+1])
  std::vector<std::vector<Entry>> entries_;
  std::vector<std::vector<std::int8_t>> lambda_, mu_;
  std::vector<std::vector<std::uint8_t>> top_degree_;
};

inline FactorTable build_factor_table(const FieldSpec& f, int max_degree, std::uint64_t budget = kDefaultBudget) {
  return FactorTable(sieve_irreducibles(f, std::max(max_degree, 1), budget), max_degree, budget);
}

// ---------------------------------------------------------------------------
// Full sums and smooth counts

/// Σ_{G ∈ M_n} λ(G) by enumeration.
inline std::int64_t liouville_full_sum(const FactorTable& t, int n) {
  std::int64_t s = 0;
  for (std::int8_t v : t.liouville_values(n)) s += v;
  return s;
}

/// (-1)^n q^{ceil(n/2)}.
inline std::int64_t liouville_full_sum_closed_form(int q, int n) {
  const auto mag = static_cast<std::int64_t>(checked_pow(q, (n + 1) / 2));
  return n % 2 ? -mag : mag;
}

inline std::int64_t liouville_full_sum(const FieldSpec& f, int n, std::uint64_t budget = kDefaultBudget) {
  require(n >= 0, "liouville_full_sum needs n >= 0");
  require_budget(checked_pow(f.q(), n), budget, "liouville_full_sum");
  return liouville_full_sum(build_factor_table(f, n, budget), n);
}

/// |S_{h,N}|: the coefficient of x^N in ∏_{d<=h} (1 - x^d)^{-pi_q(d)}.
inline BigInt count_smooth_exact(int q, int h, int N) {
  require(N >= 0 && h >= 1, "count_smooth_exact needs N >= 0, h >= 1");
  std::vector<BigInt> poly(N + 1);
  poly[0] = 1;
  for (int d = 1; d <= std::min(h, N); ++d) {
    const BigInt pi = pi_q(q, d);
    // (1 - x^d)^{-pi} = Σ_k C(pi + k - 1, k) x^{dk}
    std::vector<BigInt> series(N / d + 1);
    series[0] = 1;
    for (int k = 1; k <= N / d; ++k) series[k] = series[k - 1] * (pi + k - 1) / k;
    std::vector<BigInt> next(N + 1);
    for (int i = 0; i <= N; ++i) {
      if (poly[i] == 0) continue;
      for (int k = 0; i + d * k <= N; ++k) next[i + d * k] += poly[i] * series[k];
    }
    poly = std::move(next);
  }
  return poly[N];
}

inline BigInt count_smooth_exact(const FieldSpec& f, int h, int N) { return count_smooth_exact(f.q(), h, N); }

inline std::uint64_t count_smooth_by_enumeration(const FactorTable& t, int h, int N) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(N); ++i) c += t.is_smooth(N, i, h);
  return c;
}

struct SmoothRatios {
  /// |S_{h,N}| / (q^N e^{-(N/h) log(N/h)})
  double vs_asymptotic = 0;
  /// |S_{h,N}| / q^{N-h}
  double vs_power_saving = 0;
};

inline SmoothRatios smooth_asymptotic_ratio(int q, int h, int N) {
  require(h >= 1 && h <= N, "smooth_asymptotic_ratio needs 1 <= h <= N");
  const double count = count_smooth_exact(q, h, N).convert_to<double>();
  const double u = static_cast<double>(N) / h;
  SmoothRatios r;
  r.vs_asymptotic = count / (std::pow(q, N) * std::exp(-u * std::log(u)));
  r.vs_power_saving = count / std::pow(q, N - h);
  return r;
}

}  // namespace ffvar
