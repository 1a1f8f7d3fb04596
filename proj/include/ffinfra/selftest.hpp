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


#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ffinfra/frep.hpp"

namespace ffinfra {

struct SuiteResult {
  std::string name;
  long long checked = 0;
  long long failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && checked > 0; }
  void Expect(bool cond, const std::string& what) {
    ++checked;
    if (cond) return;
    if (failures++ == 0) first_failure = what;
  }
};

// Random divisors drawn from products of small-degree finite primes and
// random infinite coefficients.
class DivisorSampler {
 public:
  DivisorSampler(const IdealOps& I, std::uint64_t seed) : I_(I), rng_(seed) { primes_ = I.DegreeOnePrimes(8); }

  std::mt19937_64& rng() { return rng_; }
  const std::vector<FracIdeal>& primes() const { return primes_; }

  FracIdeal Ideal() {
    FracIdeal a = I_.Unit();
    if (primes_.empty()) return a;
    std::uniform_int_distribution<std::size_t> idx(0, primes_.size() - 1);
    std::uniform_int_distribution<int> ex(-2, 2);
    for (int r = 0; r < 3; ++r) {
      const int e = ex(rng_);
      if (e != 0) a = I_.Mul(a, I_.Pow(primes_[idx(rng_)], e));
    }
    return a;
  }

  std::vector<int> Coefficients(int len, int lo, int hi) {
    std::uniform_int_distribution<int> tv(lo, hi);
    std::vector<int> t(len);
    for (auto& x : t) x = tv(rng_);
    return t;
  }

 private:
  const IdealOps& I_;
  std::mt19937_64 rng_;
  std::vector<FracIdeal> primes_;
};

// Riemann's inequality, the vanishing and Riemann-Roch ranges and dim L(0) = 1
// on `samples` random divisors.
inline SuiteResult RiemannRochSuite(const Boxes& B, int samples, std::uint64_t seed) {
  const IdealOps& I = B.ideals();
  const FunctionField& K = I.field();
  DivisorSampler S(I, seed);
  SuiteResult r{"riemann-roch"};
  const int m = static_cast<int>(K.places().size());
  const long long g = K.genus();
  r.Expect(B.Dimension(I.Unit(), std::vector<int>(m, 0)) == 1, "dim L(0) != 1");
  for (int s = 0; s < samples; ++s) {
    FracIdeal a = S.Ideal();
    std::vector<int> t = S.Coefficients(m, -3, 4);
    const long long deg = I.DegDivisor(a) + K.InfiniteDegree(t);
    const long long dim = B.Dimension(a, t);
    const std::string tag = "sample " + std::to_string(s) + " deg " + std::to_string(deg) + " dim " + std::to_string(dim);
    r.Expect(dim >= deg + 1 - g, "Riemann inequality fails: " + tag);
    if (deg < 0) r.Expect(dim == 0, "nonzero space of negative degree: " + tag);
    if (deg > 2 * g - 2) r.Expect(dim == deg + 1 - g, "Riemann-Roch fails above 2g-2: " + tag);
  }
  return r;
}

// Associativity, commutativity, identity and inverse on random triples, with
// reduction idempotence and the degree bound on every FRep produced.
inline SuiteResult GroupLawSuite(const Infrastructure& X, int samples, std::uint64_t seed) {
  DivisorSampler S(X.ideals(), seed);
  SuiteResult r{"group-law"};
  const int n = X.rank();
  const FRep O = X.Identity();
  auto random_frep = [&]() { return X.Reduce(S.Ideal(), S.Coefficients(n, -6, 6)).A; };
  auto check = [&](const FRep& A, const char* what) {
    r.Expect(X.CheckInvariants(A), std::string("invariants fail on ") + what + ": " + X.Serialize(A));
  };
  check(O, "identity");
  for (int s = 0; s < samples; ++s) {
    const FRep A = random_frep(), B = random_frep(), C = random_frep();
    const FRep AB = X.Add(A, B), BC = X.Add(B, C);
    const FRep left = X.Add(AB, C), right = X.Add(A, BC);
    const FRep nA = X.Neg(A);
    const std::string tag = " (sample " + std::to_string(s) + ")";
    r.Expect(X.Same(left, right), "associativity" + tag);
    r.Expect(X.Same(AB, X.Add(B, A)), "commutativity" + tag);
    r.Expect(X.Same(X.Add(A, O), A), "identity" + tag);
    r.Expect(X.Same(X.Add(A, nA), O), "inverse" + tag);
    for (const FRep* P : {&A, &B, &C, &AB, &BC, &left, &right, &nA}) check(*P, "sample");
  }
  return r;
}

}  // namespace ffinfra
