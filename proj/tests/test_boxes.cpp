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

#include "ffinfra/boxes.hpp"

namespace ffinfra {
namespace {

std::unique_ptr<FunctionField> Kummer(std::uint32_t p, int m, std::vector<std::int64_t> g) {
  Fq F = Fq::Prime(p);
  PolyRing R(F);
  return std::make_unique<FunctionField>(KummerInput(FieldSpec{p, 1, {}}, m, R.FromInts(g)));
}

// Square root of 1 + z^5 + z^6 over F_5 to `n` terms, solved coefficient by coefficient.
std::vector<int> SqrtSeries(int n) {
  std::vector<int> c(n, 0), s(n, 0);
  c[0] = 1;
  if (n > 5) c[5] = 1;
  if (n > 6) c[6] = 1;
  s[0] = 1;
  for (int k = 1; k < n; ++k) {
    int acc = c[k];
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    acc = ((acc % 5) + 5) % 5;
    s[k] = (acc * 3) % 5;  // divide by 2 s_0 = 2; 2^{-1} = 3 mod 5
  }
  return s;
}

// Linear map (a, b) -> negative-power z-coefficients of a(1/z) + b(1/z) z^{-3} s(z),
// with deg a <= m and deg b <= m - 3; its kernel is L(m p) at the other place.
std::vector<KVec> PoleConditions(int m) {
  const int na = m + 1, nb = std::max(0, m - 2);
  std::vector<int> s = SqrtSeries(m + 2);
  std::vector<KVec> rows;
  for (int j = 0; j < na; ++j) {
    KVec r(m + 1, 0);
    r[j] = 1;  // z^{-j}; keep the coefficients of z^{-1..-m}
    r[0] = 0;
    rows.push_back(r);
  }
  for (int j = 0; j < nb; ++j) {
    KVec r(m + 1, 0);
    // z^{-(j+3)} * sum s_i z^i contributes s_i at z^{i - j - 3}.
    for (int i = 0; i < j + 3; ++i) r[j + 3 - i] = static_cast<Elem>(s[i]);
    r[0] = 0;
    rows.push_back(r);
  }
  return rows;
}

int SeriesOracleDim(const Fq& F, int m) {
  if (m < 0) return 0;
  KLinear L(F);
  return static_cast<int>(L.LeftKernel(PoleConditions(m)).size());
}

int ExhaustiveOracleDim(int m) {
  auto rows = PoleConditions(m);
  const int n = static_cast<int>(rows.size());
  long long total = 1, count = 0;
  for (int i = 0; i < n; ++i) total *= 5;
  std::vector<int> c(n, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long v = idx;
    for (int i = 0; i < n; ++i, v /= 5) c[i] = static_cast<int>(v % 5);
    bool ok = true;
    for (int col = 1; col <= m && ok; ++col) {
      int acc = 0;
      for (int i = 0; i < n; ++i) acc += c[i] * static_cast<int>(rows[i][col]);
      ok = acc % 5 == 0;
    }
    if (ok) ++count;
  }
  int dim = 0;
  while (count > 1) {
    count /= 5;
    ++dim;
  }
  return dim;
}

FFElement RandomElement(const FunctionField& K, std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(-1, max_deg);
  std::uniform_int_distribution<Elem> coef(0, K.k().q() - 1);
  auto poly = [&](int dg) {
    std::vector<Elem> c(dg + 1);
    for (auto& x : c) x = coef(rng);
    return Poly(std::move(c));
  };
  FFElement h;
  do {
    h.num.clear();
    for (int i = 0; i < K.degree(); ++i) h.num.push_back(poly(deg(rng)));
    h.den = K.R().One();
  } while (h.IsZero());
  return h;
}

// Rank over k of the elements, via their polynomial coordinates over a common denominator.
int KRank(const FunctionField& K, const std::vector<FFElement>& hs) {
  Poly L = K.R().One();
  for (auto& h : hs) L = K.R().Lcm(L, h.den);
  std::vector<KVec> rows;
  int width = 0;
  std::vector<std::vector<Poly>> nums;
  for (auto& h : hs) {
    std::vector<Poly> n;
    for (auto& c : h.num) {
      n.push_back(K.R().Mul(c, K.R().Div(L, h.den)));
      width = std::max(width, n.back().Deg() + 1);
    }
    nums.push_back(n);
  }
  for (auto& n : nums) {
    KVec r;
    for (auto& c : n)
      for (int e = 0; e < width; ++e) r.push_back(c.Coeff(e));
    rows.push_back(r);
  }
  return KLinear(K.k()).Rank(rows);
}

class BoxTest : public ::testing::Test {
 protected:
  BoxTest() : K(Kummer(5, 2, {1, 1, 0, 0, 0, 0, 1})), I(*K), B(I), primes(I.DegreeOnePrimes(8)) {}

  FracIdeal RandomIdeal(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> idx(0, static_cast<int>(primes.size()) - 1);
    std::uniform_int_distribution<int> ex(-2, 2);
    FracIdeal a = I.Unit();
    for (int r = 0; r < 3; ++r) a = I.Mul(a, I.Pow(primes[idx(rng)], ex(rng)));
    return a;
  }

  void ExpectValidBox(const FracIdeal& a, const BoxBasis& box) {
    for (auto& h : box.elements) {
      EXPECT_TRUE(I.Contains(a, h));
      auto v = K->InfiniteValuations(h);
      for (std::size_t i = 0; i < v.size(); ++i) EXPECT_GE(v[i], -box.t[i]);
    }
    EXPECT_EQ(KRank(*K, box.elements), box.dim());
  }

  std::unique_ptr<FunctionField> K;
  IdealOps I;
  Boxes B;
  std::vector<FracIdeal> primes;
};

TEST_F(BoxTest, ZeroDivisor) {
  BoxBasis box = B.RrSpace(I.Unit(), {0, 0});
  ASSERT_EQ(box.dim(), 1);
  EXPECT_EQ(box.elements[0], K->One());
}

TEST_F(BoxTest, NegativeDegreeIsEmpty) {
  EXPECT_TRUE(B.RrSpace(I.Unit(), {0, -1}).empty());
  EXPECT_TRUE(B.RrSpace(I.Unit(), {2, -3}).empty());
}

TEST_F(BoxTest, MultiplesOfDistinguishedPlaceMatchSeriesOracle) {
  for (int m = 0; m <= 8; ++m) {
    BoxBasis box = B.RrSpace(I.Unit(), {0, m});
    EXPECT_EQ(box.dim(), SeriesOracleDim(K->k(), m)) << "m=" << m;
    if (m <= 4) EXPECT_EQ(box.dim(), ExhaustiveOracleDim(m)) << "m=" << m;
    ExpectValidBox(I.Unit(), box);
  }
}

TEST_F(BoxTest, GenusByRiemannRoch) { EXPECT_EQ(B.GenusByRiemannRoch(), 2); }

TEST_F(BoxTest, RiemannInequalityOnRandomDivisors) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> tv(-3, 4);
  const int g = K->genus();
  for (int trial = 0; trial < 60; ++trial) {
    FracIdeal a = RandomIdeal(rng);
    std::vector<int> t{tv(rng), tv(rng)};
    BoxBasis box = B.RrSpace(a, t);
    const long long deg = I.DegDivisor(a) + K->InfiniteDegree(t);
    EXPECT_GE(box.dim(), deg + 1 - g);
    if (deg < 0) EXPECT_EQ(box.dim(), 0);
    if (deg > 2 * g - 2) EXPECT_EQ(box.dim(), deg + 1 - g);
    ExpectValidBox(a, box);
  }
}

TEST_F(BoxTest, MinEllOnUnitIdeal) {
  auto [ell, box] = B.MinEll(I.Unit(), {0});
  EXPECT_EQ(ell, 0);
  ASSERT_EQ(box.dim(), 1);
  EXPECT_EQ(box.elements[0], K->One());
}

TEST_F(BoxTest, MinEllMatchesScan) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> tv(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    FracIdeal a = RandomIdeal(rng);
    std::vector<int> t{tv(rng)};
    const long long lb = B.EllLowerBound(a, t);
    auto [ell, box] = B.MinEll(a, t);
    EXPECT_GE(ell, lb);
    int scan = INT_MIN;
    for (long long l = lb; l <= lb + 2 * K->genus(); ++l)
      if (B.Dimension(a, {t[0], static_cast<int>(l)}) > 0) {
        scan = static_cast<int>(l);
        break;
      }
    EXPECT_EQ(ell, scan);
    EXPECT_EQ(B.Dimension(a, {t[0], ell - 1}), 0);
    EXPECT_FALSE(box.empty());
  }
}

TEST_F(BoxTest, SmallestOfConstantBox) {
  BoxBasis box{{K->One()}, {0, 0}};
  EXPECT_EQ(B.SmallestWrtLeq(box), K->One());
  // A constant beats x, which has a pole at p_1.
  BoxBasis two{{K->X(), K->One()}, {3, 3}};
  FFElement mu = B.SmallestWrtLeq(two);
  EXPECT_EQ(K->InfiniteValuations(mu), (std::vector<int>{0, 0}));
}

std::vector<long long> OrderKey(const FunctionField& K, const FFElement& h) {
  auto v = K.InfiniteValuations(h);
  std::vector<long long> key;
  const int m = static_cast<int>(v.size());
  key.push_back(-static_cast<long long>(v[m - 1]) * K.places()[m - 1].degree);
  for (int i = 0; i + 1 < m; ++i) key.push_back(-static_cast<long long>(v[i]) * K.places()[i].degree);
  return key;
}

// All nonzero k-combinations of a small basis.
std::vector<FFElement> SpanElements(const Boxes& B, const std::vector<FFElement>& basis, Elem q) {
  std::vector<FFElement> out;
  const int r = static_cast<int>(basis.size());
  long long total = 1;
  for (int i = 0; i < r; ++i) total *= q;
  KVec c(r);
  for (long long idx = 1; idx < total; ++idx) {
    long long v = idx;
    for (int i = 0; i < r; ++i, v /= q) c[i] = static_cast<Elem>(v % q);
    out.push_back(B.Combine(basis, c));
  }
  return out;
}

TEST_F(BoxTest, SmallestMatchesExhaustiveSpan) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> tv(-2, 3);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 40; ++trial) {
    FracIdeal a = RandomIdeal(rng);
    std::vector<int> t{tv(rng), tv(rng)};
    BoxBasis box = B.RrSpace(a, t);
    if (box.empty() || box.dim() > 4) continue;
    ++tested;
    auto best = OrderKey(*K, B.SmallestWrtLeq(box));
    for (auto& h : SpanElements(B, box.elements, 5)) EXPECT_LE(best, OrderKey(*K, h));
  }
  EXPECT_GE(tested, 20);
}

TEST_F(BoxTest, SmallestIsAMinimum) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> tv(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    FracIdeal a = RandomIdeal(rng);
    auto [ell, box] = B.MinEll(a, {tv(rng)});
    FFElement mu = B.SmallestWrtLeq(box);
    auto v = K->InfiniteValuations(mu);
    std::vector<int> t{-v[0], -v[1]};
    BoxBasis around = B.RrSpace(a, t);
    ASSERT_LE(around.dim(), 4);
    for (auto& h : SpanElements(B, around.elements, 5)) EXPECT_EQ(K->InfiniteValuations(h), v);
  }
}

TEST(BoxKummerTest, RiemannRochOnOctic) {
  Fq F = Fq::Prime(1009);
  PolyRing R(F);
  Poly g = R.FromInts({81});
  for (int r = 0; r < 2; ++r) g = R.Mul(g, R.FromInts({2, 1}));
  for (int r = 0; r < 3; ++r) g = R.Mul(g, R.FromInts({-3, 1}));
  for (int r = 0; r < 3; ++r) g = R.Mul(g, R.FromInts({1, 1}));
  FunctionField K(KummerInput(FieldSpec{1009, 1, {}}, 8, g));
  IdealOps I(K);
  Boxes B(I);
  EXPECT_EQ(B.GenusByRiemannRoch(), 3);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> tv(-1, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> t(8);
    for (auto& v : t) v = tv(rng);
    BoxBasis box = B.RrSpace(I.Unit(), t);
    const long long deg = K.InfiniteDegree(t);
    EXPECT_GE(box.dim(), deg + 1 - 3);
    if (deg > 4) EXPECT_EQ(box.dim(), deg - 2);
    for (auto& h : box.elements) EXPECT_TRUE(K.InInfiniteBox(h, t));
  }
}

TEST(BoxKummerTest, GenusOnCubicAndElliptic) {
  auto K1 = Kummer(7, 3, {1, 0, 0, 0, 1});
  IdealOps I1(*K1);
  EXPECT_EQ(Boxes(I1).GenusByRiemannRoch(), K1->genus());
  auto K2 = Kummer(7, 2, {1, 1, 0, 1});
  IdealOps I2(*K2);
  EXPECT_EQ(Boxes(I2).GenusByRiemannRoch(), 1);
}

}  // namespace
}  // namespace ffinfra
