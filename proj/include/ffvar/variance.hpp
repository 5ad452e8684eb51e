#pragma once

// Variance of an arithmetic function over short intervals I_h(G_0), G_0 ∈ M_N:
//
//   Var(f_{N,h}) = q^{-N} Σ_{G_0 ∈ M_N} |Σ_{G ∈ I_h(G_0)} f(G)|^2
//
// computed directly (exact rational) and through the even characters modulo
// t^{N-h}, plus exact checks of the Ramaré-type identity and of the a_M / b_MP
// splitting of the non-smooth part.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffvar/arith.hpp"
#include "ffvar/characters.hpp"
#include "ffvar/errors.hpp"
#include "ffvar/poly.hpp"

namespace ffvar {

using Rational = boost::multiprecision::cpp_rational;

enum class ArithFunction { liouville, moebius, unit };

/// Selects one of the even functions the variance engines understand.
/// λ and μ are also symmetric and multiplicative; the constant 1 trivially so.
class ArithmeticFunctionHandle {
 public:
  constexpr ArithmeticFunctionHandle(ArithFunction kind = ArithFunction::liouville) : kind_(kind) {}

  static ArithmeticFunctionHandle parse(std::string_view name) {
    if (name == "liouville" || name == "lambda") return ArithFunction::liouville;
    if (name == "moebius" || name == "mobius" || name == "mu") return ArithFunction::moebius;
    if (name == "unit" || name == "one") return ArithFunction::unit;
    throw PreconditionError("unknown arithmetic function '" + std::string(name) + "'");
  }

  ArithFunction kind() const noexcept { return kind_; }

  std::string_view name() const noexcept {
    switch (kind_) {
      case ArithFunction::liouville: return "liouville";
      case ArithFunction::moebius: return "moebius";
      case ArithFunction::unit: return "unit";
    }
    return "?";
  }

  /// f at the monic polynomial with enumeration index idx in M_n.
  int at(const FactorTable& t, int n, std::uint64_t idx) const {
    switch (kind_) {
      case ArithFunction::liouville: return t.liouville(n, idx);
      case ArithFunction::moebius: return t.moebius(n, idx);
      case ArithFunction::unit: return 1;
    }
    return 0;
  }

  /// f(t^n).
  int at_t_power(int n) const noexcept {
    switch (kind_) {
      case ArithFunction::liouville: return n % 2 ? -1 : 1;
      case ArithFunction::moebius: return n == 0 ? 1 : (n == 1 ? -1 : 0);
      case ArithFunction::unit: return 1;
    }
    return 0;
  }

  friend bool operator==(const ArithmeticFunctionHandle&, const ArithmeticFunctionHandle&) = default;

 private:
  ArithFunction kind_;
};

/// Which power of t weights the degree-n block of the character-side sum.
///  complementary: f(t^{N-n}), the weight produced by the involution
///                 G = t^{N-n} H* when f is multiplicative and symmetric.
///  ascending:     f(t^n). Agrees with `complementary` up to a global sign for
///                 completely multiplicative ±1 functions such as λ, but not
///                 for μ.
enum class PowerWeight { complementary, ascending };

inline int power_weight(const ArithmeticFunctionHandle& f, PowerWeight w, int N, int n) {
  return w == PowerWeight::ascending ? f.at_t_power(n) : f.at_t_power(N - n);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// ---------------------------------------------------------------------------
// Direct enumeration

/// Per-interval sums of f over M_N. Accumulators over disjoint index ranges
/// merge exactly, so any split of the enumeration gives the same result.
class IntervalAccumulator {
 public:
  IntervalAccumulator(int q, int N, int h)
      : q_(q), N_(N), h_(h), interval_size_(checked_pow(q, h + 1)), sums_(checked_pow(q, N - h - 1), 0) {}

  void add_range(const FactorTable& t, const ArithmeticFunctionHandle& f, std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t i = first; i < last; ++i) sums_[i / interval_size_] += f.at(t, N_, i);
  }

  void merge(const IntervalAccumulator& other) {
    require(other.sums_.size() == sums_.size(), "merging accumulators of different shape");
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += other.sums_[i];
  }

  const std::vector<std::int64_t>& sums() const noexcept { return sums_; }

  /// (q^{h+1} / q^N) Σ_I |S_I|^2.
  Rational variance() const {
    BigInt total = 0;
    for (std::int64_t s : sums_) total += BigInt(s) * s;
    return Rational(total * BigInt(interval_size_), BigInt(checked_pow(q_, N_)));
  }

 private:
  int q_, N_, h_;
  std::uint64_t interval_size_;
  std::vector<std::int64_t> sums_;
};

inline Rational variance_direct(const FactorTable& t, const ArithmeticFunctionHandle& f, int N, int h,
                                unsigned threads = 1, std::uint64_t budget = kDefaultBudget) {
  require(h >= 0 && h < N, "variance_direct needs 0 <= h < N");
  require(N <= t.max_degree(), "FactorTable does not reach degree N");
  const FieldSpec& field = t.field();
  const MonicRange all = enumerate_monic(field, N, budget);
  const auto parts = all.split(std::max(1u, threads));
  std::vector<IntervalAccumulator> acc(parts.size(), IntervalAccumulator(field.q(), N, h));
  if (parts.size() <= 1) {
    for (std::size_t i = 0; i < parts.size(); ++i)
      acc[i].add_range(t, f, parts[i].first_index(), parts[i].first_index() + parts[i].size());
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < parts.size(); ++i)
      workers.emplace_back([&, i] {
        acc[i].add_range(t, f, parts[i].first_index(), parts[i].first_index() + parts[i].size());
      });
  }
  IntervalAccumulator total(field.q(), N, h);
  for (const auto& a : acc) total.merge(a);
  return total.variance();
}

// ---------------------------------------------------------------------------
// Character side

/// Σ_{n=0}^{N} w(n) Σ_{G ∈ M_n} f(G) χ(G) for any character χ, where w is the
/// chosen power weight. Exact rotations, summed in complex doubles.
inline std::complex<double> weighted_char_sum(const FactorTable& t, const ArithmeticFunctionHandle& f,
                                              const DirichletChar& chi, int N,
                                              PowerWeight weight = PowerWeight::ascending) {
  require(N >= 0 && N <= t.max_degree(), "weighted_char_sum: N outside FactorTable");
  const UnitGroupBasis& basis = chi.basis();
  std::vector<std::int64_t> hist(basis.residue_count(), 0);
  for (int n = 0; n <= N; ++n) {
    const int w = power_weight(f, weight, N, n);
    if (w == 0) continue;
    const MonicRange range = enumerate_monic(t.field(), n);
    for (auto it = range.begin(); it != range.end(); ++it) {
      const int v = f.at(t, n, it.index());
      if (v) hist[basis.residue(*it)] += w * v;
    }
  }
  const auto roots = roots_of_unity(basis.exponent());
  std::complex<double> s = 0;
  for (std::uint64_t u : basis.units())
    if (hist[u]) s += static_cast<double>(hist[u]) * roots[chi.rotation_units(u)];
  return s;
}

namespace detail {

/// Residue histogram modulo t^m of Σ_n w(n) f(G) over G ∈ M_n, n <= N.
/// The residue of G mod t^m is its lowest m coefficients.
inline std::vector<std::int64_t> t_power_histogram(const FactorTable& t, const ArithmeticFunctionHandle& f, int N,
                                                   int m, PowerWeight weight) {
  const int q = t.field().q();
  const std::uint64_t R = checked_pow(q, m);
  std::vector<std::int64_t> hist(R, 0);
  for (int n = 0; n <= N; ++n) {
    const int w = power_weight(f, weight, N, n);
    if (w == 0) continue;
    const std::uint64_t lead = checked_pow(q, n);  // leading coefficient sits at digit n
    for (std::uint64_t i = 0; i < t.count(n); ++i) {
      const int v = f.at(t, n, i);
      if (v) hist[(i + lead) % R] += w * v;
    }
  }
  return hist;
}

/// |Σ_r hist[r] χ(r)|^2 for each character, in the given order; parallel over
/// characters with a fixed per-character summation order.
inline std::vector<double> character_energies(const std::vector<std::int64_t>& hist,
                                              const std::vector<DirichletChar>& chars, unsigned threads) {
  std::vector<double> out(chars.size(), 0.0);
  if (chars.empty()) return out;
  const UnitGroupBasis& basis = chars.front().basis();
  const auto roots = roots_of_unity(basis.exponent());
  std::vector<std::uint64_t> support;
  for (std::uint64_t u : basis.units())
    if (hist[u]) support.push_back(u);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) {
      std::complex<double> s = 0;
      for (std::uint64_t u : support) s += static_cast<double>(hist[u]) * roots[chars[c].rotation_units(u)];
      out[c] = std::norm(s);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, chars.size());
  } else {
    std::vector<std::jthread> workers;
    for (unsigned k = 0; k < threads; ++k)
      workers.emplace_back(work, chars.size() * k / threads, chars.size() * (k + 1) / threads);
  }
  return out;
}

}  // namespace detail

/// (1/Φ_ev(t^{N-h})^2) Σ_{χ even mod t^{N-h}} |Σ_n w(n) Σ_{G ∈ M_n} f(G)χ(G)|^2.
/// With the complementary weight this equals variance_direct for even,
/// symmetric, multiplicative f.
inline double variance_charside(const FactorTable& t, const ArithmeticFunctionHandle& f, int N, int h,
                                unsigned threads = 1, PowerWeight weight = PowerWeight::complementary,
                                std::uint64_t budget = kDefaultBudget) {
  require(h >= 0 && h <= N - 2, "variance_charside needs 0 <= h <= N-2");
  require(N <= t.max_degree(), "FactorTable does not reach degree N");
  const int m = N - h;
  const auto basis = unit_group_basis(t.field(), Poly::t_power(m), budget);
  const auto even = enumerate_even_characters(basis);
  const auto hist = detail::t_power_histogram(t, f, N, m, weight);
  const auto energies = detail::character_energies(hist, even, threads);
  double total = 0;
  for (double e : energies) total += e;
  const double phi_ev = static_cast<double>(even.size());
  return total / (phi_ev * phi_ev);
}

struct VarianceReport {
  int q = 0;
  int N = 0;
  int h = 0;
  ArithmeticFunctionHandle function;
  Rational direct;
  std::optional<double> charside;
  std::optional<double> abs_gap;
  /// direct * h^2 / (N^5 q^h); undefined for h = 0.
  std::optional<double> theorem_ratio;
};

inline std::optional<double> theorem_ratio(const Rational& var, int q, int N, int h) {
  if (h < 1) return std::nullopt;
  const double bound = std::pow(static_cast<double>(N), 5) / (static_cast<double>(h) * h) * std::pow(q, h);
  return to_double(var) / bound;
}

inline VarianceReport variance_report(const FactorTable& t, const ArithmeticFunctionHandle& f, int N, int h,
                                      bool with_direct, bool with_charside, unsigned threads = 1) {
  VarianceReport r;
  r.q = t.field().q();
  r.N = N;
  r.h = h;
  r.function = f;
  if (with_direct) {
    r.direct = variance_direct(t, f, N, h, threads);
    r.theorem_ratio = theorem_ratio(r.direct, r.q, N, h);
  }
  if (with_charside) r.charside = variance_charside(t, f, N, h, threads);
  if (with_direct && with_charside) r.abs_gap = std::abs(to_double(r.direct) - *r.charside);
  return r;
}

// ---------------------------------------------------------------------------
// Exact identity checks

/// Σ over splittings G = RM, R irreducible with deg R ∈ (h, n], of
/// f(RM) / (1_{(R,M)=1} + ω_{(h,n]}(M)), minus f(G). Exactly zero whenever G
/// has a qualifying factor; otherwise NotApplicableError.
inline Rational ramare_identity_check(const FactorTable& t, const Poly& G, int h, int n,
                                      const ArithmeticFunctionHandle& f = ArithFunction::liouville) {
  require(G.is_monic() && G.degree() == n, "ramare_identity_check needs G ∈ M_n");
  require(h >= 1 && h < n, "ramare_identity_check needs 1 <= h < n");
  const FieldSpec& field = t.field();
  const auto [deg, idx] = t.locate(G);
  const int fG = f.at(t, deg, idx);
  const Factorization fz = t.factorization(deg, idx);
  Rational sum = 0;
  bool applicable = false;
  for (const auto& [R, e] : fz.factors) {
    if (R.degree() <= h || R.degree() > n) continue;
    applicable = true;
    const Poly M = divmod(field, G, R).first;
    const int coprime = e == 1 ? 1 : 0;
    const int w = omega_in_range(t.factorization(M), h, n);
    sum += Rational(fG, coprime + w);
  }
  if (!applicable)
    throw NotApplicableError("G = " + to_string(G) + " has no irreducible factor with degree in (" +
                             std::to_string(h) + ", " + std::to_string(n) + "]");
  return sum - fG;
}

struct DecompositionResult {
  Rational max_defect;
  /// A polynomial attaining the maximal defect, when it is nonzero.
  std::optional<Poly> worst;
};

/// For every G ∈ M_n, compares the weight collected by
///   Σ_{h<x<=n} [ Σ_{P ∈ P_x, M ∈ M_{n-x}} a_M at G = PM
///              + Σ_{P ∈ P_x, M ∈ M_{n-2x}} b_{MP} at G = P^2 M ]
/// with λ(G) 1{G not h-smooth}, where a_M = -λ(M)/(ω(M)+1) and
/// b_M = -λ(M)/(ω(M)(ω(M)+1)), ω = ω_{(h,n]}. Exact rationals.
inline DecompositionResult decomposition_check(const FactorTable& t, int n, int N, int h) {
  require(h >= 1, "decomposition_check needs h >= 1");
  require(n >= 0 && n <= N, "decomposition_check needs n <= N");
  require(n <= t.max_degree(), "FactorTable does not reach degree n");
  const FieldSpec& field = t.field();
  DecompositionResult res;
  if (n <= h) return res;

  std::vector<Rational> weight(t.count(n), Rational(0));
  auto omega_w = [&](int deg, std::uint64_t idx) { return t.omega_in_range(deg, idx, h, n); };

  for (int x = h + 1; x <= n; ++x) {
    // a_M for M ∈ M_{n-x}
    const int dm = n - x;
    std::vector<Rational> a(t.count(dm));
    for (std::uint64_t i = 0; i < a.size(); ++i) a[i] = Rational(-t.liouville(dm, i), omega_w(dm, i) + 1);
    for (const Poly& P : t.primes(x)) {
      const MonicRange ms = enumerate_monic(field, dm);
      for (auto it = ms.begin(); it != ms.end(); ++it)
        weight[monic_index(field, mul(field, P, *it))] += a[it.index()];
      if (2 * x > n) continue;
      const MonicRange ms2 = enumerate_monic(field, n - 2 * x);
      for (auto it = ms2.begin(); it != ms2.end(); ++it) {
        const Poly MP = mul(field, *it, P);
        const std::uint64_t mp = monic_index(field, MP);
        const int w = omega_w(n - x, mp);
        weight[monic_index(field, mul(field, MP, P))] += Rational(-t.liouville(n - x, mp), w * (w + 1));
      }
    }
  }
  for (std::uint64_t i = 0; i < weight.size(); ++i) {
    const int target = t.is_smooth(n, i, h) ? 0 : t.liouville(n, i);
    const Rational defect = abs(weight[i] - target);
    if (defect > res.max_defect) {
      res.max_defect = defect;
      res.worst = monic_from_index(field, n, i);
    }
  }
  return res;
}

}  // namespace ffvar
