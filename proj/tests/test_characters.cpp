#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "ffvar/characters.hpp"
#include "ffvar/verify.hpp"

using namespace ffvar;

namespace {

std::vector<Poly> sample_moduli(const FieldSpec& f) {
  std::vector<Poly> out;
  for (int m = 1; m <= 4; ++m) out.push_back(Poly::t_power(m));
  out.push_back(Poly{1, 1, 1});
  out.push_back(Poly{1, 0, 1});
  out.push_back(mul(f, mul(f, Poly{1, 1}, Poly{1, 1}), Poly{0, 1}));
  out.push_back(Poly{2 % f.q(), 1, 0, 1});
  return out;
}

std::uint64_t element_order(const FieldSpec& f, const Poly& Q, const Poly& u) {
  Poly x = u;
  std::uint64_t k = 1;
  while (!mod(f, x, Q).is_one()) {
    x = mod(f, mul(f, x, u), Q);
    ++k;
  }
  return k;
}

}  // namespace

TEST(RotationNumber, Arithmetic) {
  const RotationNumber a(1, 4), b(3, 4);
  EXPECT_EQ(a + b, RotationNumber(0, 1));
  EXPECT_EQ(-a, b);
  EXPECT_EQ(RotationNumber(2, 4), RotationNumber(1, 2));
  EXPECT_NEAR(RotationNumber(1, 2).value().real(), -1.0, 1e-15);
}

TEST(CyclotomicSum, ExactVanishing) {
  for (std::uint32_t L : {1u, 2u, 3u, 4u, 6u, 12u, 30u}) {
    CyclotomicSum s(L);
    for (std::uint32_t k = 0; k < L; ++k) s.add(k);
    EXPECT_EQ(s.is_zero(), L > 1) << L;
  }
  CyclotomicSum s(6);  // 1 + ζ^2 + ζ^4 = 0 for ζ a primitive 6th root
  s.add(0);
  s.add(2);
  s.add(4);
  EXPECT_TRUE(s.is_zero());
  s.add(3);
  EXPECT_FALSE(s.is_zero());
  CyclotomicSum z(5);
  z.add(1, 3);
  z.add(1, -3);
  EXPECT_TRUE(z.is_zero());
}

TEST(UnitGroup, Examples) {
  const auto b3 = unit_group_basis(make_field(3, 1), Poly{0, 1});
  EXPECT_EQ(b3->orders(), (std::vector<std::uint32_t>{2}));
  const auto b2 = unit_group_basis(make_field(2, 1), Poly{0, 0, 1});
  EXPECT_EQ(b2->order(), 2u);
  EXPECT_EQ(b2->generators(), (std::vector<std::uint64_t>{poly_code(make_field(2, 1), Poly{1, 1})}));
  // (1+t) has order 4 mod t^3 over F_2, so the group is cyclic.
  const auto c = unit_group_basis(make_field(2, 1), Poly{0, 0, 0, 1});
  EXPECT_EQ(c->order(), 4u);
  EXPECT_EQ(c->orders(), (std::vector<std::uint32_t>{4}));
  EXPECT_EQ(element_order(make_field(2, 1), Poly{0, 0, 0, 1}, Poly{1, 1}), 4u);
  EXPECT_THROW(unit_group_basis(make_field(2, 1), Poly{1}), PreconditionError);
  EXPECT_THROW(unit_group_basis(make_field(3, 1), Poly{0, 2}), PreconditionError);
}

TEST(UnitGroup, DiscreteLogsReconstructEveryUnit) {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const FieldSpec f = make_field(p, k);
    for (const Poly& Q : sample_moduli(f)) {
      const auto b = unit_group_basis(f, Q);
      std::uint64_t prod = std::accumulate(b->orders().begin(), b->orders().end(), std::uint64_t{1},
                                           std::multiplies<>());
      EXPECT_EQ(prod, b->order());
      std::uint64_t naive_phi = 0;
      for (std::uint64_t code = 1; code < b->residue_count(); ++code)
        naive_phi += gcd(f, poly_from_code(f, code), Q).is_one();
      EXPECT_EQ(b->order(), naive_phi);
      std::set<std::vector<std::uint32_t>> seen;
      for (std::uint64_t u : b->units()) {
        const auto x = b->dlog(u);
        Poly acc{1};
        for (std::size_t i = 0; i < x.size(); ++i) {
          EXPECT_LT(x[i], b->orders()[i]);
          acc = mod(f, mul(f, acc, pow(f, poly_from_code(f, b->generators()[i]), x[i])), Q);
        }
        EXPECT_EQ(acc, mod(f, poly_from_code(f, u), Q)) << to_string(Q);
        seen.emplace(x.begin(), x.end());
      }
      EXPECT_EQ(seen.size(), b->order());
    }
  }
}

TEST(UnitGroup, PhiOfTPowers) {
  for (int q : {2, 3, 4, 5}) {
    const FieldSpec f = q == 4 ? make_field(2, 2) : make_field(q, 1);
    for (int m = 1; m <= 5; ++m) {
      const auto b = unit_group_basis(f, Poly::t_power(m));
      EXPECT_EQ(b->order(), checked_pow(q, m - 1) * (q - 1));
      EXPECT_EQ(count_even(b), checked_pow(q, m - 1));
    }
  }
}

TEST(Characters, EnumerationExamples) {
  const auto b = unit_group_basis(make_field(2, 1), Poly{0, 0, 1});
  const auto chars = enumerate_characters(b);
  ASSERT_EQ(chars.size(), 2u);
  EXPECT_TRUE(chars[0].is_principal());
  EXPECT_FALSE(chars[1].is_principal());
  EXPECT_EQ(chars[1].evaluate(Poly{1, 1}), RotationNumber(1, 2));
  EXPECT_EQ(chars[0].evaluate(Poly{1, 1}), RotationNumber(0, 1));
  EXPECT_FALSE(chars[1].evaluate(Poly{0, 1, 1}).has_value());
  EXPECT_EQ(enumerate_characters(unit_group_basis(make_field(3, 1), Poly{0, 0, 0, 1})).size(), 18u);
  const auto b3 = unit_group_basis(make_field(3, 1), Poly{0, 0, 1});
  EXPECT_EQ(count_even(b3), 3u);
  EXPECT_EQ(b3->order(), 6u);
}

TEST(Characters, ExactlyOnePrincipalAndDistinctValueVectors) {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
    const FieldSpec f = make_field(p, k);
    for (const Poly& Q : sample_moduli(f)) {
      const auto b = unit_group_basis(f, Q);
      const auto chars = enumerate_characters(b);
      EXPECT_EQ(chars.size(), b->order());
      int principal = 0;
      std::set<std::vector<std::int32_t>> tables;
      for (const auto& chi : chars) {
        principal += chi.is_principal();
        tables.insert(chi.rotation_table());
      }
      EXPECT_EQ(principal, 1);
      EXPECT_TRUE(chars.front().is_principal());
      EXPECT_EQ(tables.size(), chars.size());
    }
  }
}

TEST(Characters, MultiplicativePeriodicAndZeroOffUnits) {
  const FieldSpec f = make_field(3, 1);
  for (const Poly& Q : sample_moduli(f)) {
    const auto b = unit_group_basis(f, Q);
    for (const auto& chi : enumerate_characters(b)) {
      for (const Poly& F : enumerate_monic(f, 2))
        for (const Poly& G : enumerate_monic(f, 2)) {
          const auto cf = chi.evaluate(F), cg = chi.evaluate(G), cfg = chi.evaluate(mul(f, F, G));
          EXPECT_EQ(cf.has_value(), gcd(f, F, Q).is_one());
          if (cf && cg) {
            ASSERT_TRUE(cfg.has_value());
            EXPECT_EQ(*cfg, *cf + *cg);
          } else {
            EXPECT_FALSE(cfg.has_value());
          }
          EXPECT_EQ(chi.evaluate(add(f, F, Q)), cf);
        }
    }
  }
}

TEST(Characters, EvenMeansTrivialOnConstants) {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {5, 1}, {2, 2}}) {
    const FieldSpec f = make_field(p, k);
    for (const Poly& Q : sample_moduli(f)) {
      const auto b = unit_group_basis(f, Q);
      for (const auto& chi : enumerate_characters(b)) {
        bool trivial = true;
        for (int c = 1; c < f.q(); ++c) trivial = trivial && chi.evaluate(Poly::constant(c)) == RotationNumber(0, 1);
        EXPECT_EQ(chi.is_even(), trivial);
        if (f.q() == 2) EXPECT_TRUE(chi.is_even());
      }
    }
  }
}

TEST(Characters, OrthogonalityIsExact) {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const FieldSpec f = make_field(p, k);
    for (const Poly& Q : sample_moduli(f)) {
      const auto bad = detail::check_orthogonality(unit_group_basis(f, Q));
      EXPECT_FALSE(bad.has_value()) << *bad;
    }
  }
}

TEST(Characters, EvenColumnSumsVanishOffConstants) {
  const FieldSpec f = make_field(3, 1);
  const auto b = unit_group_basis(f, Poly::t_power(3));
  const auto even = enumerate_even_characters(b);
  for (std::uint64_t u : b->units()) {
    CyclotomicSum s(b->exponent());
    for (const auto& chi : even) s.add(chi.rotation_units(u));
    EXPECT_EQ(s.is_zero(), poly_from_code(f, u).degree() > 0);
  }
}
