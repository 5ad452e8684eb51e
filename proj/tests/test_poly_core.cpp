#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ffvar/field.hpp"
#include "ffvar/poly.hpp"
#include "ffvar/sieve.hpp"

using namespace ffvar;

namespace {

// Naive polynomial product over F_p, independent of the table arithmetic.
std::vector<int> naive_mul_mod_p(const std::vector<int>& a, const std::vector<int>& b, int p) {
  std::vector<int> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  return out;
}

}  // namespace

TEST(Field, PrimeFields) {
  const FieldSpec f2 = make_field(2, 1);
  EXPECT_EQ(f2.q(), 2);
  EXPECT_TRUE(f2.modulus().empty());
  const FieldSpec f3 = make_field(3, 1);
  EXPECT_EQ(f3.mul(2, 2), 1);
  EXPECT_EQ(f3.inv(2), 2);
  for (int p : {2, 3, 5, 7, 11, 13}) {
    const FieldSpec f = make_field(p, 1);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        EXPECT_EQ(f.add(a, b), (a + b) % p);
        EXPECT_EQ(f.mul(a, b), (a * b) % p);
      }
  }
}

TEST(Field, F4ModulusIsTheOnlyIrreducibleQuadratic) {
  const FieldSpec f4 = make_field(2, 2);
  EXPECT_EQ(f4.q(), 4);
  EXPECT_EQ(f4.modulus(), (std::vector<int>{1, 1, 1}));
  // Elements are 0, 1, u, u+1 with u^2 = u+1.
  EXPECT_EQ(f4.mul(2, 2), 3);
  EXPECT_EQ(f4.mul(2, 3), 1);
}

TEST(Field, ExtensionModuliAreLexSmallest) {
  // Oracle: walk tuples with c_0 most significant and keep the first that is
  // not a product of two lower-degree monics.
  for (auto [p, k] : {std::pair{2, 3}, {3, 2}, {2, 4}}) {
    const FieldSpec f = make_field(p, k);
    std::vector<int> expected;
    const int count = static_cast<int>(std::pow(p, k));
    for (int code = 0; code < count && expected.empty(); ++code) {
      std::vector<int> cand(k + 1, 1);
      for (int i = k - 1, x = code; i >= 0; --i, x /= p) cand[i] = x % p;
      std::set<std::vector<int>> products;
      for (int d = 1; d < k; ++d) {
        const int na = static_cast<int>(std::pow(p, d)), nb = static_cast<int>(std::pow(p, k - d));
        for (int ia = 0; ia < na; ++ia)
          for (int ib = 0; ib < nb; ++ib) {
            std::vector<int> a(d + 1, 1), b(k - d + 1, 1);
            for (int i = 0, x = ia; i < d; ++i, x /= p) a[i] = x % p;
            for (int i = 0, x = ib; i < k - d; ++i, x /= p) b[i] = x % p;
            products.insert(naive_mul_mod_p(a, b, p));
          }
      }
      if (!products.contains(cand)) expected = cand;
    }
    EXPECT_EQ(f.modulus(), expected) << p << "^" << k;
  }
}

TEST(Field, AxiomsHoldForEverySupportedField) {
  for (int q = 2; q <= 16; ++q) {
    for (int p = 2; p <= q; ++p) {
      if (!is_prime(p)) continue;
      int k = 0, x = q;
      while (x % p == 0) x /= p, ++k;
      if (x != 1) continue;
      EXPECT_TRUE(check_field_axioms(make_field(p, k))) << q;
    }
  }
}

TEST(Field, RejectsBadParameters) {
  EXPECT_THROW(make_field(4, 1), PreconditionError);
  EXPECT_THROW(make_field(2, 5), PreconditionError);
  EXPECT_THROW(make_field(2, 0), PreconditionError);
  EXPECT_THROW(make_field(17, 1), PreconditionError);
}

TEST(Poly, ArithmeticExamples) {
  const FieldSpec f = make_field(2, 1);
  EXPECT_EQ(mul(f, Poly{1, 1}, Poly{1, 1}), (Poly{1, 0, 1}));
  const auto [s, r] = divmod(f, Poly{1, 1, 0, 1}, Poly{1, 0, 1});
  EXPECT_EQ(s, (Poly{0, 1}));
  EXPECT_EQ(r, (Poly{1}));
  EXPECT_EQ(gcd(f, Poly{0, 1, 0, 1}, Poly{0, 1, 1}), (Poly{0, 1, 1}));
  EXPECT_THROW(divmod(f, Poly{1, 1}, Poly{}), PreconditionError);
}

TEST(Poly, DivmodRoundTrip) {
  const FieldSpec f = make_field(3, 1);
  for (int da = 0; da <= 4; ++da)
    for (const Poly& a : enumerate_monic(f, da))
      for (int db = 0; db <= 2; ++db)
        for (const Poly& b0 : enumerate_monic(f, db)) {
          const Poly b = scale(f, b0, 2);
          const auto [s, r] = divmod(f, a, b);
          EXPECT_EQ(add(f, mul(f, s, b), r), a);
          EXPECT_TRUE(r.is_zero() || r.degree() < b.degree());
        }
}

TEST(Poly, GcdIsMonicAndDivides) {
  const FieldSpec f = make_field(3, 1);
  for (const Poly& a : enumerate_monic(f, 3))
    for (const Poly& b : enumerate_monic(f, 2)) {
      const Poly g = gcd(f, a, b);
      EXPECT_TRUE(g.is_monic());
      EXPECT_TRUE(mod(f, a, g).is_zero());
      EXPECT_TRUE(mod(f, b, g).is_zero());
    }
}

TEST(Poly, StarExamples) {
  EXPECT_EQ(star(Poly{1, 1, 1}), (Poly{1, 1, 1}));
  EXPECT_EQ(star(Poly{1, 1, 0, 1}), (Poly{1, 0, 1, 1}));
  EXPECT_EQ(star(Poly{0, 1, 1}), (Poly{1, 1}));
  EXPECT_THROW(star(Poly{}), PreconditionError);
}

TEST(Poly, ZeroPolynomialHasNoDegree) {
  EXPECT_TRUE(Poly{}.is_zero());
  EXPECT_THROW((void)Poly{}.degree(), PreconditionError);
  EXPECT_EQ((Poly{0, 0}), Poly{});
}

TEST(Poly, Formatting) {
  EXPECT_EQ(to_string(Poly{1, 1, 0, 1}), "t^3+t+1");
  EXPECT_EQ(to_string(Poly{1, 0, 2}), "2t^2+1");
  EXPECT_EQ(to_coeff_list(Poly{1, 1, 0, 1}), "[1,1,0,1]");
}

TEST(Enumerate, SmallCases) {
  const FieldSpec f2 = make_field(2, 1);
  const MonicRange m0 = enumerate_monic(f2, 0);
  ASSERT_EQ(m0.size(), 1u);
  EXPECT_TRUE((*m0.begin()).is_one());
  std::vector<Poly> m2(enumerate_monic(f2, 2).begin(), enumerate_monic(f2, 2).end());
  EXPECT_EQ(m2, (std::vector<Poly>{Poly{0, 0, 1}, Poly{1, 0, 1}, Poly{0, 1, 1}, Poly{1, 1, 1}}));
  EXPECT_EQ(enumerate_monic(make_field(3, 1), 1).size(), 3u);
}

TEST(Enumerate, DistinctMonicAndIndexed) {
  const FieldSpec f = make_field(2, 2);
  const MonicRange r = enumerate_monic(f, 3);
  std::set<std::uint64_t> codes;
  for (auto it = r.begin(); it != r.end(); ++it) {
    EXPECT_TRUE(it->is_monic());
    EXPECT_EQ(it->degree(), 3);
    EXPECT_EQ(monic_index(f, *it), it.index());
    EXPECT_EQ(monic_from_index(f, 3, it.index()), *it);
    codes.insert(poly_code(f, *it));
  }
  EXPECT_EQ(codes.size(), 64u);
}

TEST(Enumerate, SplitCoversRangeInOrder) {
  const FieldSpec f = make_field(3, 1);
  const MonicRange all = enumerate_monic(f, 4);
  for (std::size_t parts : {1u, 2u, 5u, 7u, 81u, 200u}) {
    std::vector<Poly> joined;
    for (const auto& piece : all.split(parts))
      for (const Poly& p : piece) joined.push_back(p);
    std::vector<Poly> whole(all.begin(), all.end());
    EXPECT_EQ(joined, whole) << parts;
  }
}

TEST(IntervalKey, Examples) {
  const FieldSpec f = make_field(2, 1);
  EXPECT_EQ(interval_key(f, Poly{1, 0, 1, 1}, 1).key, 1u);
  EXPECT_EQ(interval_key(f, Poly{1, 0, 0, 1}, 1).key, interval_key(f, Poly{0, 1, 0, 1}, 1).key);
  for (const Poly& G : enumerate_monic(f, 4)) EXPECT_EQ(interval_key(f, G, 3).key, 0u);
  EXPECT_THROW(interval_key(f, Poly{1, 1}, 1), PreconditionError);
}

TEST(IntervalKey, PartitionSizes) {
  for (int q : {2, 3, 4}) {
    const FieldSpec f = q == 4 ? make_field(2, 2) : make_field(q, 1);
    for (int N = 1; N <= 5; ++N)
      for (int h = 0; h < N; ++h) {
        std::map<std::uint64_t, int> classes;
        for (const Poly& G : enumerate_monic(f, N)) ++classes[interval_key(f, G, h).key];
        EXPECT_EQ(classes.size(), checked_pow(q, N - h - 1));
        for (const auto& [key, size] : classes) EXPECT_EQ(static_cast<std::uint64_t>(size), checked_pow(q, h + 1));
      }
  }
}

TEST(IntervalKey, MatchesCoefficientAgreement) {
  const FieldSpec f = make_field(3, 1);
  const int N = 4, h = 1;
  for (const Poly& a : enumerate_monic(f, N))
    for (const Poly& b : enumerate_monic(f, N)) {
      bool agree = true;
      for (int i = h + 1; i < N; ++i) agree = agree && a[i] == b[i];
      EXPECT_EQ(agree, interval_key(f, a, h).key == interval_key(f, b, h).key);
    }
}

// ---------------------------------------------------------------------------
// Sieve and cache files

namespace {

bool naive_irreducible(const FieldSpec& f, const Poly& P) {
  for (int d = 1; d < P.degree(); ++d)
    for (const Poly& D : enumerate_monic(f, d))
      if (mod(f, P, D).is_zero()) return false;
  return true;
}

}  // namespace

TEST(Sieve, Examples) {
  const FieldSpec f2 = make_field(2, 1);
  const SieveCache s = sieve_irreducibles(f2, 4);
  EXPECT_EQ(s.degree(1), (std::vector<Poly>{Poly{0, 1}, Poly{1, 1}}));
  EXPECT_EQ(s.degree(2), (std::vector<Poly>{Poly{1, 1, 1}}));
  EXPECT_EQ(s.degree(4).size(), 3u);
  EXPECT_EQ(sieve_irreducibles(make_field(3, 1), 1).degree(1).size(), 3u);
  EXPECT_THROW(sieve_irreducibles(f2, 0), PreconditionError);
}

TEST(Sieve, AgreesWithNaiveTrialDivision) {
  for (auto [p, k, D] : {std::tuple{2, 1, 8}, {3, 1, 5}, {2, 2, 4}, {5, 1, 3}}) {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = sieve_irreducibles(f, D);
    for (int n = 1; n <= D; ++n) {
      std::vector<Poly> naive;
      for (const Poly& P : enumerate_monic(f, n))
        if (naive_irreducible(f, P)) naive.push_back(P);
      EXPECT_EQ(s.degree(n), naive) << f.name() << " n=" << n;
    }
  }
}

TEST(PiQ, NecklaceValues) {
  EXPECT_EQ(pi_q(2, 1), 2u);
  EXPECT_EQ(pi_q(2, 3), 2u);
  EXPECT_EQ(pi_q(3, 2), 3u);
  EXPECT_EQ(pi_q(2, 4), 3u);
  EXPECT_EQ(pi_q(2, 12), 335u);
  EXPECT_THROW(pi_q(2, 0), PreconditionError);
  for (auto [p, k, D] : {std::tuple{2, 1, 12}, {3, 1, 7}, {2, 2, 6}, {7, 1, 4}, {2, 4, 3}}) {
    const SieveCache s = sieve_irreducibles(make_field(p, k), D);
    EXPECT_FALSE(pi_q_mismatch(s).has_value());
  }
}

TEST(SieveCacheFile, RoundTripIsIdentical) {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = sieve_irreducibles(f, 5);
    std::stringstream ss;
    write_sieve(ss, s);
    EXPECT_EQ(read_sieve(ss, f), s);
  }
}

TEST(SieveCacheFile, Format) {
  const FieldSpec f = make_field(2, 1);
  std::stringstream ss;
  write_sieve(ss, sieve_irreducibles(f, 2));
  EXPECT_EQ(ss.str(), "FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=3\n1 0 1\n1 1 1\n2 1 1 1\nEND 3\n");
  EXPECT_EQ(sieve_file_name(f), "ffsieve_p2_k1_mod-.txt");
  EXPECT_EQ(sieve_file_name(make_field(2, 2)), "ffsieve_p2_k2_mod1-1-1.txt");
  std::stringstream s4;
  write_sieve(s4, sieve_irreducibles(make_field(2, 2), 1));
  EXPECT_EQ(s4.str().substr(0, 40), "FFSIEVE 1 p=2 k=2 mod=1,1,1 maxdeg=1 cou");
}

namespace {

int corrupt_line(const std::string& text, const FieldSpec& f) {
  std::istringstream in(text);
  try {
    read_sieve(in, f);
  } catch (const CacheError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(SieveCacheFile, DetectsCorruption) {
  const FieldSpec f = make_field(2, 1);
  const std::string good = "FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=3\n1 0 1\n1 1 1\n2 1 1 1\nEND 3\n";
  EXPECT_EQ(corrupt_line(good, f), 0);
  EXPECT_EQ(corrupt_line("FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=3\n1 0 1\n1 1 1\n", f), 3);  // truncated
  EXPECT_EQ(corrupt_line("FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=3\n1 0 1\n1 1 0\n2 1 1 1\nEND 3\n", f), 3);
  EXPECT_EQ(corrupt_line("FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=3\n1 1 1\n1 0 1\n2 1 1 1\nEND 3\n", f), 3);
  EXPECT_EQ(corrupt_line("FFSIEVE 1 p=2 k=1 mod=- maxdeg=2 count=4\n1 0 1\n1 1 1\n2 1 1 1\nEND 4\n", f), 5);
  EXPECT_EQ(corrupt_line("FFSIEVE 1 p=3 k=1 mod=- maxdeg=2 count=3\n", f), 1);
  EXPECT_EQ(corrupt_line("", f), 1);
  EXPECT_EQ(corrupt_line(good + "1 0 1\n", f), 6);
}

TEST(SieveCacheFile, LoaderFallsBackOnBadFiles) {
  const FieldSpec f = make_field(3, 1);
  const auto dir = std::filesystem::temp_directory_path() / "ffvar_test_loader";
  std::filesystem::create_directories(dir);
  const auto path = dir / sieve_file_name(f);
  const SieveCache fresh = sieve_irreducibles(f, 4);
  {
    std::ofstream out(path);
    out << "FFSIEVE 1 p=3 k=1 mod=- maxdeg=4 count=2\n1 0 1\n";
  }
  std::ostringstream log;
  EXPECT_EQ(load_or_build_sieve(f, 4, dir, &log), fresh);
  EXPECT_NE(log.str().find("corrupt"), std::string::npos);
  {
    std::ofstream out(path);
    write_sieve(out, fresh);
  }
  EXPECT_EQ(load_or_build_sieve(f, 3, dir), fresh.truncated(3));
  EXPECT_EQ(load_or_build_sieve(f, 5, dir), sieve_irreducibles(f, 5));
  std::filesystem::remove_all(dir);
}
