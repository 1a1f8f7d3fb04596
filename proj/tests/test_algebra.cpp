// Copyright 2026 The ffinfra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "ffinfra/factor.hpp"

namespace ffinfra {
namespace {

Fq F31Sq() { return Fq(FieldSpec{31, 2, {3, 29, 1}}); }

TEST(FqTest, PrimeFieldProduct) {
  Fq F = Fq::Prime(5);
  EXPECT_EQ(F.Mul(3, 4), 2u);
  for (Elem a = 1; a < 5; ++a) EXPECT_EQ(F.Mul(a, F.Inv(a)), 1u);
}

TEST(FqTest, ExtensionGeneratorSquare) {
  Fq F = F31Sq();
  const Elem a = F.Gen();
  EXPECT_EQ(F.Coords(F.Mul(a, a)), (std::vector<std::uint32_t>{28, 2}));
}

TEST(FqTest, DivisionByZeroIsReported) {
  Fq F = Fq::Prime(7);
  EXPECT_THROW(F.Div(3, 0), ArithmeticError);
  EXPECT_THROW(F31Sq().Inv(0), ArithmeticError);
}

TEST(FqTest, RejectsBadSpecs) {
  EXPECT_THROW(Fq(FieldSpec{9, 1, {}}), FieldError);
  // x^2 + 1 = (x + 2)(x + 3) over F_5.
  EXPECT_THROW(Fq(FieldSpec{5, 2, {1, 0, 1}}), FieldError);
  EXPECT_NO_THROW(Fq(FieldSpec{5, 2, {2, 0, 1}}));
}

TEST(FqTest, CoordinatesRoundTrip) {
  Fq F = F31Sq();
  for (Elem a = 0; a < F.q(); a += 7) EXPECT_EQ(F.FromCoords(F.Coords(a)), a);
}

class FieldAxioms : public ::testing::TestWithParam<FieldSpec> {};

TEST_P(FieldAxioms, RandomTriples) {
  Fq F(GetParam());
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Elem> pick(0, F.q() - 1);
  for (int i = 0; i < 10000; ++i) {
    Elem a = pick(rng), b = pick(rng), c = pick(rng);
    EXPECT_EQ(F.Add(F.Add(a, b), c), F.Add(a, F.Add(b, c)));
    EXPECT_EQ(F.Mul(a, F.Add(b, c)), F.Add(F.Mul(a, b), F.Mul(a, c)));
    EXPECT_EQ(F.Mul(F.Mul(a, b), c), F.Mul(a, F.Mul(b, c)));
    EXPECT_EQ(F.Mul(a, F.Pow(a, F.q() - 1)), a);
    EXPECT_EQ(F.Sub(F.Add(a, b), b), a);
    if (b != 0) EXPECT_EQ(F.Mul(F.Div(a, b), b), a);
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, FieldAxioms,
                         ::testing::Values(FieldSpec{2, 1, {}}, FieldSpec{5, 1, {}},
                                           FieldSpec{1009, 1, {}}, FieldSpec{31, 2, {3, 29, 1}},
                                           FieldSpec{2, 3, {1, 1, 0, 1}}, FieldSpec{3, 4, {2, 0, 0, 1, 1}}));

// Schoolbook product over a prime field, written independently of PolyRing.
std::vector<std::int64_t> NaiveMul(const std::vector<std::int64_t>& a,
                                   const std::vector<std::int64_t>& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::int64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<std::int64_t> ToInts(const Poly& a) {
  return std::vector<std::int64_t>(a.c.begin(), a.c.end());
}

std::vector<std::int64_t> NaiveAdd(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b,
                                   std::int64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly RandomPoly(const PolyRing& R, std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(-1, max_deg);
  std::uniform_int_distribution<Elem> coef(0, R.field().q() - 1);
  std::vector<Elem> c(deg(rng) + 1);
  for (auto& x : c) x = coef(rng);
  return Poly(std::move(c));
}

TEST(PolyTest, XGcdCommonFactor) {
  Fq F = Fq::Prime(5);
  PolyRing R(F);
  auto r = R.XGcd(R.FromInts({-1, 0, 1}), R.FromInts({-1, 1}));
  EXPECT_EQ(r.g, R.FromInts({-1, 1}));
}

TEST(PolyTest, XGcdDegenerate) {
  Fq F = Fq::Prime(5);
  PolyRing R(F);
  Poly a = R.FromInts({1, 2, 3});
  auto r = R.XGcd(a, R.Zero());
  EXPECT_EQ(r.g, R.Monic(a));
  EXPECT_EQ(r.u, R.Const(F.Inv(3)));
  EXPECT_TRUE(r.v.IsZero());
  EXPECT_THROW(R.XGcd(R.Zero(), R.Zero()), ArithmeticError);
}

TEST(PolyTest, XGcdBezoutRandomF7) {
  Fq F = Fq::Prime(7);
  PolyRing R(F);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Poly a = RandomPoly(R, rng, 8), b = RandomPoly(R, rng, 8);
    if (a.IsZero() && b.IsZero()) continue;
    auto r = R.XGcd(a, b);
    auto lhs = NaiveAdd(NaiveMul(ToInts(r.u), ToInts(a), 7), NaiveMul(ToInts(r.v), ToInts(b), 7), 7);
    EXPECT_EQ(lhs, ToInts(r.g));
    EXPECT_EQ(r.g.Lc(), 1u);
    EXPECT_TRUE(R.Divides(r.g, a));
    EXPECT_TRUE(R.Divides(r.g, b));
  }
}

TEST(PolyTest, MulMatchesSchoolbook) {
  Fq F = Fq::Prime(1009);
  PolyRing R(F);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Poly a = RandomPoly(R, rng, 30), b = RandomPoly(R, rng, 30);
    EXPECT_EQ(ToInts(R.Mul(a, b)), NaiveMul(ToInts(a), ToInts(b), 1009));
    if (!b.IsZero()) {
      auto [q, r] = R.DivMod(a, b);
      EXPECT_EQ(R.Add(R.Mul(q, b), r), a);
      EXPECT_LT(r.Deg(), b.Deg());
    }
  }
}

TEST(PolyTest, FrobeniusIdentity) {
  for (const FieldSpec& spec : {FieldSpec{5, 1, {}}, FieldSpec{31, 2, {3, 29, 1}}}) {
    Fq F(spec);
    PolyRing R(F);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
      Poly f = RandomPoly(R, rng, 4);
      EXPECT_EQ(R.Pow(f, F.q()), R.FrobeniusPower(f));
    }
  }
}

TEST(FactorTest, DifferenceOfSquares) {
  Fq F = Fq::Prime(5);
  PolyRing R(F);
  Factorizer fz(R);
  auto fac = fz.Factor(R.FromInts({-1, 0, 1}));
  ASSERT_EQ(fac.terms.size(), 2u);
  EXPECT_EQ(fac.terms[0].factor, R.FromInts({1, 1}));
  EXPECT_EQ(fac.terms[1].factor, R.FromInts({-1, 1}));
  EXPECT_EQ(fac.terms[0].multiplicity, 1);
}

TEST(FactorTest, LinearIsIrreducible) {
  for (const FieldSpec& spec : {FieldSpec{2, 1, {}}, FieldSpec{1009, 1, {}}, FieldSpec{31, 2, {3, 29, 1}}}) {
    Fq F(spec);
    PolyRing R(F);
    Factorizer fz(R);
    auto fac = fz.Factor(R.X());
    ASSERT_EQ(fac.terms.size(), 1u);
    EXPECT_EQ(fac.terms[0].factor, R.X());
    EXPECT_EQ(fac.terms[0].multiplicity, 1);
  }
}

// Trial division by the monic linear polynomials only: a cubic over F_3
// splits off its roots one at a time; what is left has no roots and, being
// of degree <= 3, is irreducible.
std::vector<std::pair<std::vector<std::int64_t>, int>> TrialDivisionCubic(std::vector<std::int64_t> f) {
  const std::int64_t p = 3;
  std::vector<std::pair<std::vector<std::int64_t>, int>> out;
  for (std::int64_t r = 0; r < p; ++r) {
    int mult = 0;
    for (;;) {
      // Synthetic division by (x - r).
      std::vector<std::int64_t> q(f.size() - 1);
      std::int64_t carry = 0;
      for (std::size_t i = f.size(); i-- > 0;) {
        std::int64_t v = (f[i] + carry) % p;
        if (i == 0) {
          carry = v;
        } else {
          q[i - 1] = v;
          carry = v * r % p;
        }
      }
      if (carry != 0 || f.size() <= 1) break;
      f = q;
      ++mult;
    }
    if (mult > 0) out.push_back({{(p - r) % p, 1}, mult});
  }
  if (f.size() > 1) out.push_back({f, 1});
  return out;
}

TEST(FactorTest, AllMonicCubicsOverF3) {
  Fq F = Fq::Prime(3);
  PolyRing R(F);
  Factorizer fz(R);
  for (int idx = 0; idx < 27; ++idx) {
    std::vector<std::int64_t> f = {idx % 3, (idx / 3) % 3, idx / 9, 1};
    auto expect = TrialDivisionCubic(f);
    auto got = fz.Factor(R.FromInts(f));
    Poly prod = R.One();
    for (auto& t : got.terms) {
      EXPECT_TRUE(fz.IsIrreducible(t.factor));
      prod = R.Mul(prod, R.Pow(t.factor, t.multiplicity));
    }
    EXPECT_EQ(prod, R.FromInts(f));
    ASSERT_EQ(got.terms.size(), expect.size()) << "cubic index " << idx;
    for (auto& [fac, mult] : expect) {
      bool found = false;
      for (auto& t : got.terms)
        if (t.factor == R.FromInts(fac) && t.multiplicity == mult) found = true;
      EXPECT_TRUE(found) << "cubic index " << idx;
    }
  }
}

TEST(FactorTest, RandomProductsRemultiply) {
  for (const FieldSpec& spec : {FieldSpec{5, 1, {}}, FieldSpec{1009, 1, {}}, FieldSpec{31, 2, {3, 29, 1}},
                                FieldSpec{2, 1, {}}, FieldSpec{2, 3, {1, 1, 0, 1}}}) {
    Fq F(spec);
    PolyRing R(F);
    Factorizer fz(R, 77);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      Poly f = R.One();
      for (int k = 0; k < 3; ++k) {
        Poly g = RandomPoly(R, rng, 4);
        if (g.IsZero()) continue;
        f = R.Mul(f, R.Pow(g, 1 + (i + k) % 3));
      }
      if (f.IsZero()) continue;
      auto fac = fz.Factor(f);
      Poly prod = R.Const(fac.unit);
      for (auto& t : fac.terms) {
        EXPECT_TRUE(fz.IsIrreducible(t.factor));
        EXPECT_EQ(t.factor.Lc(), 1u);
        prod = R.Mul(prod, R.Pow(t.factor, t.multiplicity));
      }
      EXPECT_EQ(prod, f);
    }
  }
}

TEST(FactorTest, IrreducibilityAgreesWithRootCount) {
  Fq F = Fq::Prime(7);
  PolyRing R(F);
  Factorizer fz(R);
  for (int idx = 0; idx < 49; ++idx) {
    Poly f = R.FromInts({idx % 7, idx / 7, 1});
    EXPECT_EQ(fz.IsIrreducible(f), fz.Roots(f).empty());
  }
}

}  // namespace
}  // namespace ffinfra
