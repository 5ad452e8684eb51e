#pragma once

// Exact-identity suites shared by `ffvar verify` and the test binaries.
// Each suite stops at its first counterexample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ffvar/arith.hpp"
#include "ffvar/bounds.hpp"
#include "ffvar/characters.hpp"
#include "ffvar/field.hpp"
#include "ffvar/poly.hpp"
#include "ffvar/sieve.hpp"
#include "ffvar/variance.hpp"

namespace ffvar {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string counterexample;
};

struct VerifyConfig {
  std::vector<FieldSpec> fields;
  int n_max = 6;
  std::uint64_t seed = 1;
  int trials = 20;
  int star_pairs = 1000;
  /// Negate λ(t^3+t+1) in the q=2 table.
  bool inject_fault = false;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "field",  "involution", "liouville_sum", "pi_q",          "smooth",   "orthogonality",
      "ramare", "decomposition", "mvt",        "variance",
  };
  return names;
}

namespace detail {

inline std::string fmt_case(const FieldSpec& f, const std::string& rest) {
  return "q=" + std::to_string(f.q()) + " " + rest;
}

class VerifyContext {
 public:
  explicit VerifyContext(const VerifyConfig& cfg) : cfg_(cfg) {}

  const VerifyConfig& config() const { return cfg_; }

  const FactorTable& table(const FieldSpec& f) {
    auto it = tables_.find(f.name());
    if (it != tables_.end()) return it->second;
    FactorTable t = build_factor_table(f, cfg_.n_max);
    if (cfg_.inject_fault && f.q() == 2 && cfg_.n_max >= 3) t.flip_liouville(3, monic_index(f, Poly{1, 1, 0, 1}));
    return tables_.emplace(f.name(), std::move(t)).first->second;
  }

 private:
  VerifyConfig cfg_;
  std::map<std::string, FactorTable> tables_;
};

inline std::optional<std::string> suite_field(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields)
    if (!check_field_axioms(f)) return fmt_case(f, "field axioms fail for " + f.name());
  return std::nullopt;
}

inline std::optional<std::string> suite_involution(VerifyContext& ctx) {
  const auto& cfg = ctx.config();
  for (const auto& f : cfg.fields) {
    const FactorTable& t = ctx.table(f);
    for (int n = 0; n <= cfg.n_max; ++n) {
      const MonicRange range = enumerate_monic(f, n);
      for (auto it = range.begin(); it != range.end(); ++it) {
        const Poly& F = *it;
        if (F[0] == 0) continue;
        const Poly S = star(F);
        if (star(S) != F) return fmt_case(f, "star(star(F)) != F for F=" + to_coeff_list(F));
        if (t.liouville(n, it.index()) != t.liouville(S))
          return fmt_case(f, "lambda(F) != lambda(F*) for F=" + to_coeff_list(F));
      }
    }
    std::mt19937_64 gen(cfg.seed);
    const int half = std::max(1, cfg.n_max / 2);
    for (int i = 0; i < cfg.star_pairs; ++i) {
      const int da = 1 + static_cast<int>(gen() % half);
      const int db = 1 + static_cast<int>(gen() % half);
      const Poly F = monic_from_index(f, da, gen() % checked_pow(f.q(), da));
      const Poly G = monic_from_index(f, db, gen() % checked_pow(f.q(), db));
      if (star(mul(f, F, G)) != mul(f, star(F), star(G)))
        return fmt_case(f, "star not multiplicative for F=" + to_coeff_list(F) + " G=" + to_coeff_list(G));
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_liouville_sum(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const FactorTable& t = ctx.table(f);
    for (int n = 0; n <= ctx.config().n_max; ++n) {
      const std::int64_t got = liouville_full_sum(t, n);
      const std::int64_t want = liouville_full_sum_closed_form(f.q(), n);
      if (got != want)
        return fmt_case(f, "n=" + std::to_string(n) + " sum lambda = " + std::to_string(got) + ", expected " +
                               std::to_string(want));
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_pi_q(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const SieveCache s = sieve_irreducibles(f, std::max(1, ctx.config().n_max));
    if (auto bad = pi_q_mismatch(s))
      return fmt_case(f, "n=" + std::to_string(*bad) + " sieve count " + std::to_string(s.degree(*bad).size()) +
                             " != pi_q " + std::to_string(pi_q(f, *bad)));
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_smooth(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const FactorTable& t = ctx.table(f);
    for (int N = 1; N <= ctx.config().n_max; ++N)
      for (int h = 1; h <= N; ++h) {
        const BigInt dp = count_smooth_exact(f, h, N);
        const std::uint64_t brute = count_smooth_by_enumeration(t, h, N);
        if (dp != brute)
          return fmt_case(f, "N=" + std::to_string(N) + " h=" + std::to_string(h) + " DP " + dp.str() +
                                 " != enumeration " + std::to_string(brute));
      }
  }
  return std::nullopt;
}

/// Row and column orthogonality, exactly, plus the Φ and Φ_ev counts for t^m.
inline std::optional<std::string> check_orthogonality(const std::shared_ptr<const UnitGroupBasis>& b) {
  const FieldSpec& f = b->field();
  const std::string mod = "Q=" + to_coeff_list(b->modulus());
  const auto chars = enumerate_characters(b);
  if (chars.size() != b->order()) return fmt_case(f, mod + " character count != Phi");
  const std::uint32_t L = b->exponent();
  for (std::size_t c = 0; c < chars.size(); ++c) {
    CyclotomicSum s(L);
    for (std::uint64_t u : b->units()) s.add(chars[c].rotation_units(u));
    if (chars[c].is_principal() == s.is_zero())
      return fmt_case(f, mod + " row sum wrong for character #" + std::to_string(c));
  }
  for (std::uint64_t u : b->units()) {
    CyclotomicSum s(L);
    for (const auto& chi : chars) s.add(chi.rotation_units(u));
    const bool identity = u == 1;
    if (identity == s.is_zero())
      return fmt_case(f, mod + " column sum wrong at " + to_coeff_list(poly_from_code(f, u)));
  }
  const int m = b->modulus_degree();
  if (b->modulus() == Poly::t_power(m)) {
    const std::uint64_t qm1 = checked_pow(f.q(), m - 1);
    if (b->order() != qm1 * (f.q() - 1)) return fmt_case(f, mod + " Phi(t^m) != q^(m-1)(q-1)");
    if (count_even(b) != qm1) return fmt_case(f, mod + " Phi_ev(t^m) != q^(m-1)");
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_orthogonality(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const int top = std::min(ctx.config().n_max, f.q() <= 3 ? 5 : 4);
    std::vector<Poly> moduli;
    for (int m = 1; m <= top; ++m) moduli.push_back(Poly::t_power(m));
    moduli.push_back(Poly{1, 1, 1});
    moduli.push_back(mul(f, mul(f, Poly{1, 1}, Poly{1, 1}), Poly{0, 1}));
    for (const Poly& Q : moduli)
      if (auto bad = check_orthogonality(unit_group_basis(f, Q))) return bad;
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_ramare(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const FactorTable& t = ctx.table(f);
    for (int n = 2; n <= std::min(ctx.config().n_max, 8); ++n) {
      const MonicRange range = enumerate_monic(f, n);
      for (const Poly& G : range)
        for (int h = 1; h < n; ++h) {
          try {
            const Rational d = ramare_identity_check(t, G, h, n);
            if (d != 0)
              return fmt_case(f, "h=" + std::to_string(h) + " G=" + to_coeff_list(G) + " defect " + d.str());
          } catch (const NotApplicableError&) {
          }
        }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_decomposition(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const FactorTable& t = ctx.table(f);
    for (int n = 2; n <= std::min(ctx.config().n_max, 8); ++n)
      for (int h = 1; h < n; ++h) {
        const DecompositionResult r = decomposition_check(t, n, n, h);
        if (r.max_defect != 0)
          return fmt_case(f, "n=" + std::to_string(n) + " h=" + std::to_string(h) + " G=" +
                                 to_coeff_list(*r.worst) + " defect " + r.max_defect.str());
      }
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_mvt(VerifyContext& ctx) {
  const auto& cfg = ctx.config();
  for (const auto& f : cfg.fields) {
    const std::vector<Poly> moduli = {Poly{0, 0, 1}, Poly{1, 1, 1}};
    for (const Poly& Q : moduli)
      for (int n = 1; n <= std::min(cfg.n_max, 6); ++n) {
        TrialConfig tc{cfg.seed, cfg.trials, CoefficientDistribution::plus_minus_one};
        for (const auto& r : mvt_trial(f, Q, n, tc))
          if (!r.pass)
            return fmt_case(f, "Q=" + to_coeff_list(Q) + " n=" + std::to_string(n) + " ratio " +
                                   std::to_string(r.ratio));
      }
  }
  return std::nullopt;
}

inline std::optional<std::string> suite_variance(VerifyContext& ctx) {
  for (const auto& f : ctx.config().fields) {
    const FactorTable& t = ctx.table(f);
    for (ArithFunction fn : {ArithFunction::liouville, ArithFunction::moebius})
      for (int N = 2; N <= ctx.config().n_max; ++N)
        for (int h = 0; h <= N - 2; ++h) {
          const double direct = to_double(variance_direct(t, fn, N, h));
          const double charside = variance_charside(t, fn, N, h);
          if (std::abs(direct - charside) > 1e-6 * std::max(1.0, direct))
            return fmt_case(f, std::string(ArithmeticFunctionHandle(fn).name()) + " N=" + std::to_string(N) +
                                   " h=" + std::to_string(h) + " direct " + std::to_string(direct) +
                                   " char " + std::to_string(charside));
        }
  }
  return std::nullopt;
}

}  // namespace detail

/// Runs the named suites (all when `only` is empty) in the canonical order.
inline std::vector<SuiteResult> run_verify(const VerifyConfig& cfg, const std::vector<std::string>& only = {}) {
  using Fn = std::optional<std::string> (*)(detail::VerifyContext&);
  const std::map<std::string, Fn> table = {
      {"field", detail::suite_field},
      {"involution", detail::suite_involution},
      {"liouville_sum", detail::suite_liouville_sum},
      {"pi_q", detail::suite_pi_q},
      {"smooth", detail::suite_smooth},
      {"orthogonality", detail::suite_orthogonality},
      {"ramare", detail::suite_ramare},
      {"decomposition", detail::suite_decomposition},
      {"mvt", detail::suite_mvt},
      {"variance", detail::suite_variance},
  };
  for (const auto& name : only)
    if (!table.contains(name)) throw PreconditionError("unknown suite '" + name + "'");
  require(!cfg.fields.empty(), "verify needs at least one field");
  require(cfg.n_max >= 1, "verify needs n-max >= 1");
  detail::VerifyContext ctx(cfg);
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    SuiteResult r;
    r.name = name;
    if (auto bad = table.at(name)(ctx)) {
      r.pass = false;
      r.counterexample = *bad;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ffvar
