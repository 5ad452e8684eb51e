#pragma once

// Monic irreducibles over F_q by degree, the necklace count pi_q(n), and the
// FFSIEVE text cache.
//
// Cache layout (one file per field):
//   FFSIEVE 1 p=<p> k=<k> mod=<digits|-> maxdeg=<d> count=<total>
//   <degree> <c0> <c1> ... <c_degree>      one line per irreducible
//   END <total>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffvar/errors.hpp"
#include "ffvar/field.hpp"
#include "ffvar/poly.hpp"

namespace ffvar {

/// Möbius function on positive integers.
inline int integer_moebius(int n) {
  int result = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

/// Number of monic irreducibles of degree n over F_q:
/// (1/n) Σ_{d|n} μ(d) q^{n/d}.
inline std::uint64_t pi_q(int q, int n) {
  require(n >= 1, "pi_q needs n >= 1");
  __int128 sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    sum += static_cast<__int128>(integer_moebius(d)) * checked_pow(q, n / d);
  }
  return static_cast<std::uint64_t>(sum / n);
}

inline std::uint64_t pi_q(const FieldSpec& f, int n) { return pi_q(f.q(), n); }

struct SieveCache {
  FieldSpec field;
  int max_degree = 0;
  /// by_degree[n] lists P_n in enumeration order; by_degree[0] is empty.
  std::vector<std::vector<Poly>> by_degree;

  const std::vector<Poly>& degree(int n) const {
    require(n >= 0 && n <= max_degree, "sieve does not cover degree " + std::to_string(n));
    return by_degree[n];
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& v : by_degree) t += v.size();
    return t;
  }

  SieveCache truncated(int n) const {
    require(n <= max_degree, "cannot extend a sieve by truncation");
    SieveCache c{field, n, {by_degree.begin(), by_degree.begin() + n + 1}};
    return c;
  }

  friend bool operator==(const SieveCache&, const SieveCache&) = default;
};

/// Exhaustive sieve: a monic polynomial of degree n is reducible iff it is
/// P*M for some irreducible P with deg P <= n/2.
inline SieveCache sieve_irreducibles(const FieldSpec& f, int max_degree,
                                     std::uint64_t budget = kDefaultBudget) {
  require(max_degree >= 1, "sieve needs max_degree >= 1");
  SieveCache cache{f, max_degree, std::vector<std::vector<Poly>>(max_degree + 1)};
  for (int n = 1; n <= max_degree; ++n) {
    const MonicRange all = enumerate_monic(f, n, budget);
    std::vector<bool> composite(all.size(), false);
    for (int d = 1; 2 * d <= n; ++d)
      for (const Poly& p : cache.by_degree[d])
        for (const Poly& m : enumerate_monic(f, n - d, budget))
          composite[monic_index(f, mul(f, p, m))] = true;
    for (auto it = all.begin(); it != all.end(); ++it)
      if (!composite[it.index()]) cache.by_degree[n].push_back(*it);
  }
  return cache;
}

/// First degree whose sieve count disagrees with pi_q, if any.
inline std::optional<int> pi_q_mismatch(const SieveCache& c) {
  for (int n = 1; n <= c.max_degree; ++n)
    if (c.by_degree[n].size() != pi_q(c.field, n)) return n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// FFSIEVE files

inline std::string modulus_field_string(const FieldSpec& f) {
  if (f.modulus().empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < f.modulus().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(f.modulus()[i]);
  }
  return s;
}

inline std::string sieve_file_name(const FieldSpec& f) {
  std::string mod = modulus_field_string(f);
  for (char& c : mod)
    if (c == ',') c = '-';
  return "ffsieve_p" + std::to_string(f.p()) + "_k" + std::to_string(f.k()) + "_mod" + mod + ".txt";
}

inline void write_sieve(std::ostream& os, const SieveCache& c) {
  const std::uint64_t total = c.total();
  os << "FFSIEVE 1 p=" << c.field.p() << " k=" << c.field.k()
     << " mod=" << modulus_field_string(c.field) << " maxdeg=" << c.max_degree
     << " count=" << total << '\n';
  for (int n = 1; n <= c.max_degree; ++n) {
    for (const Poly& p : c.by_degree[n]) {
      os << n;
      for (int i = 0; i <= n; ++i) os << ' ' << static_cast<int>(p[i]);
      os << '\n';
    }
  }
  os << "END " << total << '\n';
}

namespace detail {

inline std::string header_value(const std::string& token, const std::string& key, int line) {
  if (token.rfind(key + "=", 0) != 0) throw CacheError("expected " + key + "=", line);
  return token.substr(key.size() + 1);
}

inline long long parse_ll(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw CacheError("malformed integer '" + s + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw CacheError("malformed integer '" + s + "'", line);
  }
}

}  // namespace detail

/// Parses and validates a cache for `f`: header fields, monicity, strictly
/// increasing (degree, enumeration) order, and both declared totals.
inline SieveCache read_sieve(std::istream& is, const FieldSpec& f) {
  std::string line;
  int lineno = 1;
  if (!std::getline(is, line)) throw CacheError("empty cache file", lineno);
  std::istringstream hs(line);
  std::string magic, version, tp, tk, tmod, tmax, tcount, extra;
  hs >> magic >> version >> tp >> tk >> tmod >> tmax >> tcount;
  if (magic != "FFSIEVE" || version != "1") throw CacheError("bad magic/version", lineno);
  if (hs >> extra) throw CacheError("trailing header fields", lineno);
  if (detail::parse_ll(detail::header_value(tp, "p", lineno), lineno) != f.p() ||
      detail::parse_ll(detail::header_value(tk, "k", lineno), lineno) != f.k() ||
      detail::header_value(tmod, "mod", lineno) != modulus_field_string(f))
    throw CacheError("cache belongs to a different field", lineno);
  const long long maxdeg = detail::parse_ll(detail::header_value(tmax, "maxdeg", lineno), lineno);
  const long long declared = detail::parse_ll(detail::header_value(tcount, "count", lineno), lineno);
  if (maxdeg < 1 || maxdeg >= Poly::kCapacity) throw CacheError("maxdeg out of range", lineno);

  SieveCache c{f, static_cast<int>(maxdeg), std::vector<std::vector<Poly>>(maxdeg + 1)};
  long long seen = 0;
  std::optional<Poly> prev;
  bool ended = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) throw CacheError("blank line", lineno);
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "END") {
      std::string tot;
      ls >> tot;
      if (detail::parse_ll(tot, lineno) != declared || seen != declared)
        throw CacheError("count mismatch: header " + std::to_string(declared) + ", END " + tot +
                             ", entries " + std::to_string(seen),
                         lineno);
      ended = true;
      break;
    }
    const long long deg = detail::parse_ll(first, lineno);
    if (deg < 1 || deg > maxdeg) throw CacheError("degree out of range", lineno);
    std::vector<Elem> coeffs;
    std::string tok;
    while (ls >> tok) {
      const long long v = detail::parse_ll(tok, lineno);
      if (v < 0 || v >= f.q()) throw CacheError("coefficient outside the field", lineno);
      coeffs.push_back(static_cast<Elem>(v));
    }
    if (static_cast<long long>(coeffs.size()) != deg + 1) throw CacheError("wrong coefficient count", lineno);
    const Poly p = Poly::from_coeffs(coeffs);
    if (!p.is_monic() || p.degree() != deg) throw CacheError("entry is not monic of the stated degree", lineno);
    if (prev && !(*prev < p)) throw CacheError("entries out of order", lineno);
    prev = p;
    c.by_degree[deg].push_back(p);
    ++seen;
  }
  if (!ended) throw CacheError("missing END line (truncated file)", lineno);
  if (std::getline(is, line)) throw CacheError("data after END", lineno + 1);
  return c;
}

/// Loads `<dir>/<sieve_file_name>` when it covers `max_degree` and agrees with
/// pi_q; otherwise recomputes in memory. Problems are reported on `log`.
/// Never writes.
inline SieveCache load_or_build_sieve(const FieldSpec& f, int max_degree,
                                      const std::optional<std::filesystem::path>& dir,
                                      std::ostream* log = nullptr,
                                      std::uint64_t budget = kDefaultBudget) {
  if (dir) {
    const auto path = *dir / sieve_file_name(f);
    std::ifstream in(path);
    if (in) {
      try {
        SieveCache c = read_sieve(in, f);
        if (auto bad = pi_q_mismatch(c)) {
          if (log) *log << "cache " << path << ": count at degree " << *bad << " disagrees with pi_q; recomputing\n";
        } else if (c.max_degree >= max_degree) {
          return c.truncated(max_degree);
        }
      } catch (const CacheError& e) {
        if (log) *log << "cache " << path << " is corrupt: " << e.what() << "; recomputing\n";
      }
    }
  }
  return sieve_irreducibles(f, max_degree, budget);
}

}  // namespace ffvar
