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

#include <map>
#include <random>
#include <set>

#include "ffinfra/frep.hpp"
#include "test_support.hpp"

namespace ffinfra {
namespace {

using ffinfra::testing::GenusTwoClassNumber;
using ffinfra::testing::Kummer;

// Smallest m > 0 with a nonzero element of L(m p_2 - m p_1): the order of
// p_1 - p_2 in Pic, which equals det Lambda for rank one with degree-one places.
int UnitIndexOracle(const Boxes& B) {
  for (int m = 1; m < 10000; ++m)
    if (B.Dimension(B.ideals().Unit(), {-m, m}) > 0) return m;
  return -1;
}

class FRepTest : public ::testing::Test {
 protected:
  // y^2 = x^6 + x + 1 over F_5: genus 2, two degree-one places at infinity.
  FRepTest() : K(Kummer(5, 2, {1, 1, 0, 0, 0, 0, 1})), I(*K), B(I), X(B) {
    order = UnitIndexOracle(B);
    FRep g = X.FromDistance(I.Unit(), {1});
    FRep cur = X.Identity();
    for (int k = 0; k < order; ++k) {
      walk.push_back(cur);
      cur = X.Add(cur, g);
    }
    wrapped = cur;
  }

  std::unique_ptr<FunctionField> K;
  IdealOps I;
  Boxes B;
  Infrastructure X;
  int order = 0;
  std::vector<FRep> walk;  // walk[k] = k * g_1
  FRep wrapped;
};

TEST_F(FRepTest, UnitIdealIsReduced) {
  Reduction r = X.Reduce(I.Unit(), {0});
  EXPECT_EQ(r.delta, std::vector<int>({0}));
  EXPECT_TRUE(X.Same(r.A, X.Identity()));
  EXPECT_TRUE(X.CheckInvariants(X.Identity()));
}

TEST_F(FRepTest, IdentityLabelIsFixed) {
  const std::string label = X.Label(X.Identity());
  EXPECT_EQ(label, I.CanonicalBytes(I.Unit()) + std::string(4, '\0'));
}

TEST_F(FRepTest, DistanceMapIsBijective) {
  ASSERT_GT(order, 1);
  ASSERT_LE(order, 500);
  std::set<std::string> labels;
  for (int k = 0; k < order; ++k) {
    ASSERT_TRUE(X.CheckInvariants(walk[k])) << k;
    EXPECT_EQ(*walk[k].dist, DistanceVec({k}));
    EXPECT_TRUE(X.Same(walk[k], X.FromDistance(I.Unit(), {k})));
    labels.insert(X.Label(walk[k]));
  }
  EXPECT_EQ(static_cast<int>(labels.size()), order);
  EXPECT_EQ(X.Label(wrapped), X.Label(X.Identity()));
  EXPECT_EQ(*wrapped.dist, DistanceVec({order}));
  // Distances are read modulo the unit lattice.
  EXPECT_TRUE(X.Same(X.FromDistance(I.Unit(), {order + 3}), walk[3]));
  EXPECT_TRUE(X.Same(X.FromDistance(I.Unit(), {-1}), walk[order - 1]));
}

TEST_F(FRepTest, CayleyTableMatchesCyclicGroup) {
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      FRep s = X.Add(walk[i], walk[j]);
      ASSERT_EQ(X.Label(s), X.Label(walk[(i + j) % order])) << i << "+" << j;
    }
    EXPECT_EQ(X.Label(X.Neg(walk[i])), X.Label(walk[(order - i) % order]));
  }
}

TEST_F(FRepTest, GroupLawsOnRandomTriples) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, order - 1);
  const FRep e = X.Identity();
  for (int it = 0; it < 1000; ++it) {
    const FRep& a = walk[pick(rng)];
    const FRep& b = walk[pick(rng)];
    const FRep& c = walk[pick(rng)];
    ASSERT_TRUE(X.Same(X.Add(X.Add(a, b), c), X.Add(a, X.Add(b, c))));
    ASSERT_TRUE(X.Same(X.Add(a, b), X.Add(b, a)));
    ASSERT_TRUE(X.Same(X.Add(e, a), a));
    ASSERT_TRUE(X.Same(X.Add(a, X.Neg(a)), e));
  }
  EXPECT_TRUE(X.Same(X.Neg(e), e));
}

TEST_F(FRepTest, PrincipalReductionTracksDistance) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Elem> coef(0, 4);
  std::uniform_int_distribution<int> tt(-6, 6);
  for (int it = 0; it < 40; ++it) {
    FFElement h;
    do {
      h = K->Zero();
      for (auto& c : h.num) c = Poly({coef(rng), coef(rng), coef(rng)});
    } while (h.IsZero());
    const int t = tt(rng);
    Reduction r = X.Reduce(I.Principal(K->Inv(h)), {t});
    ASSERT_TRUE(X.CheckInvariants(r.A));
    // (1/h) O_K has distance Psi(h) relative to O_K.
    const long long v = t + K->Psi(h)[0];
    const int k = static_cast<int>(((v % order) + order) % order);
    EXPECT_TRUE(X.Same(r.A, walk[k])) << it;
    EXPECT_EQ(r.delta[0], r.A.t[0] - t);
  }
}

TEST_F(FRepTest, ReductionIsIdempotent) {
  for (auto& A : walk) {
    Reduction r = X.Reduce(A.ideal, A.t);
    EXPECT_EQ(r.delta, std::vector<int>({0}));
    EXPECT_TRUE(X.Same(r.A, A));
  }
}

TEST_F(FRepTest, EquivalenceIsEqualityWithDegreeOnePlace) {
  for (auto& A : walk)
    for (auto& C : walk) EXPECT_EQ(X.IsEquiv(A.ideal, C.ideal), A.ideal == C.ideal);
}

TEST_F(FRepTest, GiantStepIsReducedProduct) {
  EXPECT_EQ(X.GiantStep(I.Unit(), I.Unit()), I.Unit());
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      if (walk[i].t[0] != 0 || walk[j].t[0] != 0) continue;
      FRep s = X.Add(walk[i], walk[j]);
      EXPECT_EQ(X.GiantStep(walk[i].ideal, walk[j].ideal), s.ideal);
    }
}

// y^2 = x^6 + x^2 + 1 over F_5 has det Lambda = 5 and h = 45, so O_K has
// ideal classes of order dividing 9.
TEST(FRepClassTest, OplusOnNonPrincipalClass) {
  auto K = Kummer(5, 2, {1, 0, 1, 0, 0, 0, 1});
  IdealOps I(*K);
  Boxes B(I);
  Infrastructure X(B);
  const int order = UnitIndexOracle(B);
  ASSERT_EQ(order, 5);
  EXPECT_EQ(GenusTwoClassNumber(5, {1, 0, 1, 0, 0, 0, 1}, {3, 0, 1}), 45);
  std::vector<FRep> walk;
  std::unordered_set<std::string> principal;
  for (int k = 0; k < order; ++k) {
    walk.push_back(X.FromDistance(I.Unit(), {k}));
    principal.insert(X.Label(walk.back()));
  }
  std::optional<FracIdeal> a;
  for (auto& P : I.DegreeOnePrimes(32))
    if (!principal.count(X.Label(X.Reduce(P, {0}).A))) {
      a = P;
      break;
    }
  ASSERT_TRUE(a.has_value());
  std::vector<FRep> cls;
  std::unordered_set<std::string> labels;
  for (int k = 0; k < order; ++k) {
    cls.push_back(X.FromDistance(*a, {k}));
    ASSERT_TRUE(X.CheckInvariants(cls.back()));
    labels.insert(X.Label(cls.back()));
  }
  ASSERT_EQ(static_cast<int>(labels.size()), order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      FRep s = X.Oplus(cls[i], cls[j], *a, &labels);
      ASSERT_EQ(X.Label(s), X.Label(cls[(i + j) % order]));
      EXPECT_EQ(*s.dist, DistanceVec({i + j}));
    }
  EXPECT_TRUE(X.Same(X.Oplus(cls[3], X.Reduce(*a, {0}).A, *a, &labels), cls[3]));
  EXPECT_THROW(X.Oplus(walk[1], cls[0], *a, &labels), std::invalid_argument);
  // Over O_K, oplus is add.
  EXPECT_TRUE(X.Same(X.Oplus(walk[2], walk[3], I.Unit()), X.Add(walk[2], walk[3])));
}

TEST_F(FRepTest, SerializationRoundTrip) {
  for (auto& A : walk) {
    const std::string s = X.Serialize(A);
    FRep B2 = X.Parse(s);
    EXPECT_TRUE(X.Same(A, B2));
    EXPECT_EQ(B2.dist, A.dist);
  }
  EXPECT_THROW(X.Parse("frep1 00 00 t=0"), std::invalid_argument);
}

// y^2 = 2x^6 + x + 1 over F_5: the only infinite place has degree two.
class DegreeTwoTest : public ::testing::Test {
 protected:
  DegreeTwoTest() : K(Kummer(5, 2, {1, 1, 0, 0, 0, 0, 2})), I(*K), B(I), X(B) {}

  // Closure of the given elements under add.
  std::map<std::string, FRep> Closure(const std::vector<FRep>& gens) const {
    std::map<std::string, FRep> seen;
    std::vector<FRep> queue{X.Identity()};
    seen.emplace(X.Label(queue[0]), queue[0]);
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (auto& g : gens) {
        FRep s = X.Add(queue[i], g);
        if (seen.emplace(X.Label(s), s).second) queue.push_back(s);
      }
    return seen;
  }

  std::unique_ptr<FunctionField> K;
  IdealOps I;
  Boxes B;
  Infrastructure X;
};

TEST_F(DegreeTwoTest, PicZeroImageIsDivisibilitySubset) {
  ASSERT_EQ(K->unit_rank(), 0);
  ASSERT_EQ(K->distinguished().degree, 2);
  ASSERT_EQ(K->genus(), 2);
  const long long h = GenusTwoClassNumber(5, {1, 1, 0, 0, 0, 0, 2}, {3, 0, 1});
  auto primes = I.DegreeOnePrimes(64);
  ASSERT_GE(primes.size(), 2u);
  std::vector<FRep> gens, zero_gens;
  for (auto& P : primes) gens.push_back(X.Reduce(P, {}).A);
  for (std::size_t i = 1; i < primes.size(); ++i) zero_gens.push_back(X.Reduce(I.Div(primes[i], primes[0]), {}).A);
  zero_gens.push_back(X.Reduce(I.Mul(primes[0], primes[0]), {}).A);

  auto all = Closure(gens);
  EXPECT_EQ(static_cast<long long>(all.size()), 2 * h);
  auto image = Closure(zero_gens);
  EXPECT_EQ(static_cast<long long>(image.size()), h);
  std::size_t divisible = 0;
  for (auto& [label, A] : all) {
    ASSERT_TRUE(X.CheckInvariants(A));
    const bool even = X.Degree(A) % 2 == 0;
    divisible += even;
    EXPECT_EQ(even, image.count(label) == 1);
  }
  EXPECT_EQ(divisible, image.size());
}

TEST_F(DegreeTwoTest, EquivalenceAndGroupLaws) {
  auto primes = I.DegreeOnePrimes(64);
  std::vector<FRep> gens;
  for (auto& P : primes) gens.push_back(X.Reduce(P, {}).A);
  auto all = Closure(gens);
  std::vector<FRep> elems;
  for (auto& [label, A] : all) elems.push_back(A);
  for (auto& A : elems)
    for (auto& C : elems) EXPECT_EQ(X.IsEquiv(A.ideal, C.ideal), A.ideal == C.ideal);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
  for (int it = 0; it < 300; ++it) {
    const FRep& a = elems[pick(rng)];
    const FRep& b = elems[pick(rng)];
    const FRep& c = elems[pick(rng)];
    ASSERT_TRUE(X.Same(X.Add(X.Add(a, b), c), X.Add(a, X.Add(b, c))));
    ASSERT_TRUE(X.Same(X.Add(a, b), X.Add(b, a)));
    ASSERT_TRUE(X.Same(X.Add(a, X.Neg(a)), X.Identity()));
    ASSERT_TRUE(X.Same(X.Neg(X.Neg(a)), a));
  }
}

}  // namespace
}  // namespace ffinfra
