#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ffvar/arith.hpp"

using namespace ffvar;

namespace {

// Factorisation by dividing out every monic polynomial of increasing degree.
// Needs no sieve: the first divisor found at each step is irreducible.
std::vector<std::pair<Poly, int>> naive_factor(const FieldSpec& f, Poly F) {
  F = make_monic(f, F);
  std::vector<std::pair<Poly, int>> out;
  for (int d = 1; F.degree() > 0 && d <= F.degree(); ++d) {
    for (const Poly& D : enumerate_monic(f, d)) {
      int e = 0;
      while (F.degree() >= d && mod(f, F, D).is_zero()) {
        F = divmod(f, F, D).first;
        ++e;
      }
      if (e) out.emplace_back(D, e);
    }
  }
  return out;
}

int naive_liouville(const FieldSpec& f, const Poly& F) {
  int big = 0;
  for (const auto& [P, e] : naive_factor(f, F)) big += e;
  return big % 2 ? -1 : 1;
}

int naive_moebius(const FieldSpec& f, const Poly& F) {
  const auto fz = naive_factor(f, F);
  for (const auto& pe : fz)
    if (pe.second > 1) return 0;
  return fz.size() % 2 ? -1 : 1;
}

std::uint64_t naive_phi(const FieldSpec& f, const Poly& Q) {
  std::uint64_t c = 0;
  for (std::uint64_t code = 1; code < checked_pow(f.q(), Q.degree()); ++code)
    c += gcd(f, poly_from_code(f, code), Q).is_one();
  return c;
}

}  // namespace

TEST(Factor, Examples) {
  const FieldSpec f = make_field(2, 1);
  const SieveCache s = sieve_irreducibles(f, 4);
  const Factorization a = factor(s, Poly{0, 0, 1, 0, 1});
  ASSERT_EQ(a.factors.size(), 2u);
  EXPECT_EQ(a.factors[0], std::make_pair(Poly{0, 1}, 2));
  EXPECT_EQ(a.factors[1], std::make_pair(Poly{1, 1}, 2));
  const Factorization b = factor(s, Poly{1, 1, 1});
  ASSERT_EQ(b.factors.size(), 1u);
  EXPECT_EQ(b.factors[0], std::make_pair(Poly{1, 1, 1}, 1));
  EXPECT_TRUE(factor(s, Poly{1}).factors.empty());
  EXPECT_THROW(factor(s, Poly{}), PreconditionError);
  EXPECT_THROW(factor(sieve_irreducibles(f, 1), Poly{1, 1, 1, 1, 1, 1}), PreconditionError);
}

TEST(Factor, ReconstructsAndMatchesNaive) {
  for (auto [p, k, D] : {std::tuple{2, 1, 8}, {3, 1, 5}, {2, 2, 4}}) {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = sieve_irreducibles(f, D);
    for (int n = 0; n <= D; ++n)
      for (const Poly& G : enumerate_monic(f, n)) {
        const Poly F = scale(f, G, static_cast<Elem>(f.q() - 1));
        const Factorization fz = factor(s, F);
        EXPECT_EQ(fz.product(f), F);
        EXPECT_EQ(fz.factors, naive_factor(f, F));
      }
  }
}

TEST(ArithFunctions, Examples) {
  const FieldSpec f = make_field(2, 1);
  const SieveCache s = sieve_irreducibles(f, 6);
  EXPECT_EQ(liouville(s, Poly{1}), 1);
  EXPECT_EQ(moebius(s, Poly{1}), 1);
  EXPECT_EQ(von_mangoldt(s, Poly{1}), 0);
  EXPECT_EQ(liouville(s, Poly{0, 1, 1, 1}), 1);
  EXPECT_EQ(moebius(s, Poly{0, 1, 1, 1}), 1);
  EXPECT_EQ(von_mangoldt(s, Poly{1, 0, 1}), 1);
  EXPECT_EQ(euler_phi(s, Poly{0, 0, 1}), 2u);
  EXPECT_EQ(omega(s, Poly{0, 0, 1, 0, 1}), 2);
  EXPECT_EQ(big_omega(s, Poly{0, 0, 1, 0, 1}), 4);
  EXPECT_THROW(liouville(s, Poly{}), PreconditionError);
}

TEST(ArithFunctions, OmegaInRangeExamples) {
  const FieldSpec f = make_field(2, 1);
  const SieveCache s = sieve_irreducibles(f, 4);
  EXPECT_EQ(omega_in_range(s, Poly{0, 1, 1, 1}, 1, 3), 1);
  EXPECT_EQ(omega_in_range(s, Poly{0, 0, 0, 1}, 1, 3), 0);
  EXPECT_EQ(omega_in_range(s, mul(f, Poly{1, 1, 1}, Poly{1, 1, 1}), 1, 4), 1);
}

TEST(ArithFunctions, AgreeWithNaiveOracles) {
  for (auto [p, k, D] : {std::tuple{2, 1, 7}, {3, 1, 4}, {2, 2, 3}}) {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = sieve_irreducibles(f, D);
    for (int n = 1; n <= D; ++n)
      for (const Poly& G : enumerate_monic(f, n)) {
        EXPECT_EQ(liouville(s, G), naive_liouville(f, G));
        EXPECT_EQ(moebius(s, G), naive_moebius(f, G));
        EXPECT_EQ(euler_phi(s, G), naive_phi(f, G));
        const auto fz = naive_factor(f, G);
        const int lam = fz.size() == 1 ? fz[0].first.degree() : 0;
        EXPECT_EQ(von_mangoldt(s, G), lam);
      }
  }
}

TEST(FactorTable, MatchesPerPolynomialFactorisation) {
  for (auto [p, k, D] : {std::tuple{2, 1, 9}, {3, 1, 6}, {2, 2, 4}, {5, 1, 3}}) {
    const FieldSpec f = make_field(p, k);
    const SieveCache s = sieve_irreducibles(f, D);
    const FactorTable t(s, D);
    for (int n = 0; n <= D; ++n) {
      ASSERT_EQ(t.count(n), checked_pow(f.q(), n));
      const MonicRange r = enumerate_monic(f, n);
      for (auto it = r.begin(); it != r.end(); ++it) {
        const Factorization fz = factor(s, *it);
        ASSERT_EQ(t.factorization(n, it.index()).factors, fz.factors) << to_string(*it);
        EXPECT_EQ(t.liouville(n, it.index()), liouville(fz));
        EXPECT_EQ(t.moebius(n, it.index()), moebius(fz));
        EXPECT_EQ(t.von_mangoldt(n, it.index()), von_mangoldt(fz));
        int top = 0;
        for (const auto& pe : fz.factors) top = std::max(top, pe.first.degree());
        EXPECT_EQ(t.largest_prime_degree(n, it.index()), top);
        for (int lo = 0; lo <= n; ++lo)
          EXPECT_EQ(t.omega_in_range(n, it.index(), lo, n), omega_in_range(fz, lo, n));
      }
    }
  }
}

TEST(FactorTable, LocateNormalisesScalars) {
  const FieldSpec f = make_field(3, 1);
  const FactorTable t = build_factor_table(f, 4);
  const Poly G{2, 0, 1, 1};
  const Poly twoG = scale(f, G, 2);
  EXPECT_EQ(t.locate(twoG), t.locate(G));
  EXPECT_EQ(t.liouville(twoG), t.liouville(G));
  EXPECT_EQ(t.factorization(twoG).product(f), twoG);
}

TEST(LiouvilleSum, Examples) {
  const FieldSpec f = make_field(2, 1);
  EXPECT_EQ(liouville_full_sum(f, 2), 2);
  EXPECT_EQ(liouville_full_sum(f, 3), -4);
  EXPECT_EQ(liouville_full_sum(make_field(5, 1), 0), 1);
  EXPECT_EQ(liouville_full_sum_closed_form(3, 5), -27);
}

TEST(SmoothCount, Examples) {
  EXPECT_EQ(count_smooth_exact(2, 1, 3), 4);
  EXPECT_EQ(count_smooth_exact(2, 2, 4), 9);
  EXPECT_EQ(count_smooth_exact(3, 7, 5), 243);
  EXPECT_EQ(count_smooth_exact(2, 3, 0), 1);
  EXPECT_THROW(count_smooth_exact(2, 0, 3), PreconditionError);
}

TEST(SmoothCount, LargeParametersStayExact) {
  // q=5, N=20, h=20 is all of M_20.
  EXPECT_EQ(count_smooth_exact(5, 20, 20), BigInt(95367431640625ULL));
  EXPECT_GT(count_smooth_exact(16, 3, 40), BigInt(0));
}

TEST(SmoothCount, MatchesEnumeration) {
  for (int q : {2, 3}) {
    const FactorTable t = build_factor_table(make_field(q, 1), 8);
    for (int N = 1; N <= 8; ++N)
      for (int h = 1; h <= N; ++h) EXPECT_EQ(count_smooth_exact(q, h, N), count_smooth_by_enumeration(t, h, N));
  }
}

TEST(SmoothCount, AsymptoticRatios) {
  EXPECT_EQ(smooth_asymptotic_ratio(2, 5, 5).vs_asymptotic, 1.0);
  EXPECT_NEAR(smooth_asymptotic_ratio(2, 2, 4).vs_asymptotic, 9.0 / 4.0, 1e-12);
  EXPECT_EQ(smooth_asymptotic_ratio(2, 1, 3).vs_power_saving, 1.0);
  EXPECT_THROW(smooth_asymptotic_ratio(2, 4, 3), PreconditionError);
}
