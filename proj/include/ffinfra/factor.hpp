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

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "ffinfra/poly.hpp"

namespace ffinfra {

struct FactorTerm {
  Poly factor;  // monic irreducible
  int multiplicity = 0;
  bool operator==(const FactorTerm&) const = default;
};

struct Factorization {
  Elem unit = 0;  // leading coefficient of the input
  std::vector<FactorTerm> terms;
};

// Polynomial factorization over F_q: squarefree decomposition, then
// distinct-degree and equal-degree splitting. Fields with q <= 32 use a
// deterministic splitter (exhaustive roots and enumerated splitting
// polynomials); larger fields draw splitting polynomials from a seeded RNG.
class Factorizer {
 public:
  explicit Factorizer(const PolyRing& ring, std::uint64_t seed = 0x5eed)
      : R_(ring), rng_(seed) {}

  // Returns (s_k, k) with s_k squarefree, pairwise coprime, and
  // prod s_k^k = f for monic f.
  std::vector<std::pair<Poly, int>> Squarefree(const Poly& f) const {
    std::map<int, Poly> acc;
    SquarefreeInto(R_.Monic(f), 1, acc);
    std::vector<std::pair<Poly, int>> out;
    for (auto& [k, s] : acc)
      if (s.Deg() > 0) out.emplace_back(s, k);
    return out;
  }

  // For squarefree monic f: (g_k, k) where g_k is the product of all
  // irreducible factors of degree k.
  std::vector<std::pair<Poly, int>> DistinctDegree(const Poly& f) const {
    std::vector<std::pair<Poly, int>> out;
    Poly rest = R_.Monic(f);
    Poly h = R_.Mod(R_.X(), rest);
    const Poly x = R_.X();
    for (int i = 1; rest.Deg() >= 2 * i; ++i) {
      h = R_.PowMod(h, R_.field().q(), rest);
      Poly g = R_.Gcd(rest, R_.Sub(h, x));
      if (g.Deg() > 0) {
        out.emplace_back(g, i);
        rest = R_.Div(rest, g);
        h = R_.Mod(h, rest);
      }
    }
    if (rest.Deg() > 0) out.emplace_back(rest, rest.Deg());
    return out;
  }

  // Splits a squarefree monic product of irreducibles of degree k.
  std::vector<Poly> EqualDegree(const Poly& f, int k) {
    std::vector<Poly> out;
    if (f.Deg() <= 0) return out;
    if (f.Deg() == k) {
      out.push_back(R_.Monic(f));
      return out;
    }
    const Fq& F = R_.field();
    if (k == 1 && F.q() <= 32) {
      for (Elem a = 0; a < F.q(); ++a)
        if (R_.Eval(f, a) == 0) out.push_back(R_.Linear(a));
      return out;
    }
    std::uint64_t counter = 1;
    for (;;) {
      Poly h = NextSplitter(f.Deg(), counter);
      Poly g = R_.Gcd(h, f);
      if (g.Deg() <= 0 || g.Deg() == f.Deg()) g = R_.Gcd(SplitMap(h, f, k), f);
      if (g.Deg() > 0 && g.Deg() < f.Deg()) {
        auto a = EqualDegree(g, k);
        auto b = EqualDegree(R_.Div(f, g), k);
        out.insert(out.end(), a.begin(), a.end());
        out.insert(out.end(), b.begin(), b.end());
        return out;
      }
    }
  }

  Factorization Factor(const Poly& f) {
    if (f.IsZero()) throw ArithmeticError("cannot factor the zero polynomial");
    Factorization res;
    res.unit = f.Lc();
    for (auto& [s, mult] : Squarefree(f)) {
      for (auto& [g, k] : DistinctDegree(s)) {
        for (auto& irr : EqualDegree(g, k)) res.terms.push_back({irr, mult});
      }
    }
    std::sort(res.terms.begin(), res.terms.end(), [](const FactorTerm& a, const FactorTerm& b) {
      if (a.factor.Deg() != b.factor.Deg()) return a.factor.Deg() < b.factor.Deg();
      return a.factor < b.factor;
    });
    return res;
  }

  // Rabin's test.
  bool IsIrreducible(const Poly& f) const {
    const int n = f.Deg();
    if (n <= 0) return false;
    if (n == 1) return true;
    const Poly m = R_.Monic(f);
    const std::uint32_t q = R_.field().q();
    std::vector<Poly> xq(n + 1);
    xq[0] = R_.Mod(R_.X(), m);
    for (int i = 1; i <= n; ++i) xq[i] = R_.PowMod(xq[i - 1], q, m);
    if (!(xq[n] == xq[0])) return false;
    int rest = n;
    for (int r = 2; r <= rest; ++r) {
      if (rest % r != 0) continue;
      while (rest % r == 0) rest /= r;
      Poly g = R_.Gcd(m, R_.Sub(xq[n / r], R_.X()));
      if (g.Deg() > 0) return false;
    }
    return true;
  }

  // All roots of f in F_q (without multiplicity), ascending.
  std::vector<Elem> Roots(const Poly& f) {
    std::vector<Elem> roots;
    if (f.Deg() <= 0) return roots;
    Poly s;
    {
      const Poly m = R_.Monic(f);
      Poly h = R_.PowMod(R_.X(), R_.field().q(), m);
      s = R_.Gcd(m, R_.Sub(h, R_.X()));
    }
    for (auto& lin : EqualDegree(s, 1)) roots.push_back(R_.field().Neg(lin.Coeff(0)));
    std::sort(roots.begin(), roots.end());
    return roots;
  }

 private:
  void SquarefreeInto(const Poly& f, int scale, std::map<int, Poly>& acc) const {
    if (f.Deg() <= 0) return;
    const Fq& F = R_.field();
    Poly c = R_.Gcd(f, R_.Derivative(f));
    Poly w = R_.Div(f, c);
    int i = 1;
    while (w.Deg() > 0) {
      Poly y = R_.Gcd(w, c);
      Poly fac = R_.Div(w, y);
      if (fac.Deg() > 0) Merge(acc, i * scale, fac);
      w = y;
      c = R_.Div(c, y);
      ++i;
    }
    if (c.Deg() > 0) {
      const std::uint32_t p = F.p();
      const std::uint64_t root_exp = F.q() / p;
      std::vector<Elem> rc(c.Deg() / p + 1, 0);
      for (int k = 0; k <= c.Deg(); k += static_cast<int>(p)) rc[k / p] = F.Pow(c.Coeff(k), root_exp);
      SquarefreeInto(Poly(std::move(rc)), scale * static_cast<int>(p), acc);
    }
  }

  void Merge(std::map<int, Poly>& acc, int k, const Poly& f) const {
    auto it = acc.find(k);
    if (it == acc.end()) {
      acc[k] = f;
    } else {
      it->second = R_.Mul(it->second, f);
    }
  }

  Poly NextSplitter(int n, std::uint64_t& counter) {
    const Fq& F = R_.field();
    const std::uint32_t q = F.q();
    std::vector<Elem> c(n, 0);
    if (q <= 32) {
      // Enumerate non-constant polynomials of degree < n in a fixed order.
      std::uint64_t v = ++counter;
      for (int i = 0; i < n && v; ++i) {
        c[i] = static_cast<Elem>(v % q);
        v /= q;
      }
    } else {
      std::uniform_int_distribution<std::uint32_t> dist(0, q - 1);
      for (auto& x : c) x = dist(rng_);
    }
    return Poly(std::move(c));
  }

  // h^((q^k - 1)/2) - 1 for odd q, the trace map for even q.
  Poly SplitMap(const Poly& h, const Poly& f, int k) const {
    const Fq& F = R_.field();
    const std::uint32_t q = F.q();
    Poly hm = R_.Mod(h, f);
    if (F.p() != 2) {
      // h^(1 + q + ... + q^(k-1)) then raise to (q-1)/2.
      Poly acc = hm, cur = hm;
      for (int i = 1; i < k; ++i) {
        cur = R_.PowMod(cur, q, f);
        acc = R_.MulMod(acc, cur, f);
      }
      Poly u = R_.PowMod(acc, (q - 1) / 2, f);
      return R_.Sub(u, R_.One());
    }
    const std::uint32_t steps = F.e() * static_cast<std::uint32_t>(k);
    Poly t = hm, cur = hm;
    for (std::uint32_t i = 1; i < steps; ++i) {
      cur = R_.MulMod(cur, cur, f);
      t = R_.Add(t, cur);
    }
    return t;
  }

  const PolyRing& R_;
  std::mt19937_64 rng_;
};

}  // namespace ffinfra
