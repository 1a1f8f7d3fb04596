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
#include <string>
#include <utility>
#include <vector>

#include "ffinfra/fq.hpp"

namespace ffinfra {

// Univariate polynomial over F_q with ascending coefficients. The zero
// polynomial has an empty coefficient vector; otherwise the last entry is
// nonzero.
struct Poly {
  std::vector<Elem> c;

  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs) : c(std::move(coeffs)) { Trim(); }

  void Trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int Deg() const { return static_cast<int>(c.size()) - 1; }
  bool IsZero() const { return c.empty(); }
  bool IsOne() const { return c.size() == 1 && c[0] == 1; }
  Elem Lc() const { return c.empty() ? 0 : c.back(); }
  Elem Coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0;
  }
  bool operator==(const Poly&) const = default;
  bool operator<(const Poly& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (std::size_t i = c.size(); i-- > 0;)
      if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
  }
};

struct XGcdResult {
  Poly g, u, v;
};

// Arithmetic on Poly values over a fixed F_q. The ring only borrows the
// field; the field must outlive it.
class PolyRing {
 public:
  explicit PolyRing(const Fq& field) : F_(&field) {}

  const Fq& field() const { return *F_; }

  Poly Zero() const { return Poly(); }
  Poly One() const { return Poly({1}); }
  Poly X() const { return Poly({0, 1}); }
  Poly Const(Elem a) const { return Poly({a}); }
  Poly Monomial(Elem a, int k) const {
    if (a == 0) return Poly();
    std::vector<Elem> c(k + 1, 0);
    c[k] = a;
    return Poly(std::move(c));
  }
  // x - a
  Poly Linear(Elem a) const { return Poly({F_->Neg(a), 1}); }

  Poly FromInts(const std::vector<std::int64_t>& v) const {
    std::vector<Elem> c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = F_->FromInt(v[i]);
    return Poly(std::move(c));
  }

  Poly Add(const Poly& a, const Poly& b) const {
    const Fq& F = *F_;
    const std::size_t n = std::max(a.c.size(), b.c.size());
    std::vector<Elem> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Elem x = i < a.c.size() ? a.c[i] : 0;
      const Elem y = i < b.c.size() ? b.c[i] : 0;
      r[i] = F.Add(x, y);
    }
    return Poly(std::move(r));
  }

  Poly Neg(const Poly& a) const {
    Poly r = a;
    for (auto& x : r.c) x = F_->Neg(x);
    return r;
  }

  Poly Sub(const Poly& a, const Poly& b) const {
    const Fq& F = *F_;
    const std::size_t n = std::max(a.c.size(), b.c.size());
    std::vector<Elem> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Elem x = i < a.c.size() ? a.c[i] : 0;
      const Elem y = i < b.c.size() ? b.c[i] : 0;
      r[i] = F.Sub(x, y);
    }
    return Poly(std::move(r));
  }

  Poly Scale(const Poly& a, Elem s) const {
    if (s == 0) return Poly();
    Poly r = a;
    for (auto& x : r.c) x = F_->Mul(x, s);
    return r;
  }

  Poly ShiftUp(const Poly& a, int k) const {
    if (a.IsZero() || k == 0) return a;
    std::vector<Elem> c(k, 0);
    c.insert(c.end(), a.c.begin(), a.c.end());
    return Poly(std::move(c));
  }

  // a - s * x^k * b, the elementary step of most eliminations.
  Poly SubMulShift(const Poly& a, Elem s, int k, const Poly& b) const {
    if (s == 0 || b.IsZero()) return a;
    const Fq& F = *F_;
    std::vector<Elem> r = a.c;
    if (r.size() < b.c.size() + k) r.resize(b.c.size() + k, 0);
    const Elem ns = F.Neg(s);
    for (std::size_t i = 0; i < b.c.size(); ++i)
      r[i + k] = F.Add(r[i + k], F.Mul(ns, b.c[i]));
    return Poly(std::move(r));
  }

  Poly Mul(const Poly& a, const Poly& b) const {
    if (a.IsZero() || b.IsZero()) return Poly();
    const Fq& F = *F_;
    const std::size_t na = a.c.size(), nb = b.c.size();
    std::vector<Elem> r(na + nb - 1, 0);
    if (F.IsPrimeField()) {
      const std::uint64_t p = F.p();
      // Accumulate in 64 bits; (p-1)^2 * 2^20 stays below 2^64 for p < 2^16.
      std::vector<std::uint64_t> acc(na + nb - 1, 0);
      std::size_t since = 0;
      const std::size_t flush = std::size_t(1) << 20;
      for (std::size_t i = 0; i < na; ++i) {
        const std::uint64_t ai = a.c[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < nb; ++j) acc[i + j] += ai * b.c[j];
        if (++since == flush) {
          for (auto& x : acc) x %= p;
          since = 0;
        }
      }
      for (std::size_t k = 0; k < acc.size(); ++k) r[k] = static_cast<Elem>(acc[k] % p);
    } else {
      for (std::size_t i = 0; i < na; ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < nb; ++j)
          r[i + j] = F.Add(r[i + j], F.Mul(a.c[i], b.c[j]));
      }
    }
    return Poly(std::move(r));
  }

  // Division with remainder; b must be nonzero.
  std::pair<Poly, Poly> DivMod(const Poly& a, const Poly& b) const {
    if (b.IsZero()) throw ArithmeticError("polynomial division by zero");
    const Fq& F = *F_;
    if (a.Deg() < b.Deg()) return {Poly(), a};
    std::vector<Elem> r = a.c;
    const int db = b.Deg();
    std::vector<Elem> qc(a.Deg() - db + 1, 0);
    const Elem inv = F.Inv(b.Lc());
    for (int k = a.Deg(); k >= db; --k) {
      const Elem coef = r[k];
      if (coef == 0) continue;
      const Elem t = F.Mul(coef, inv);
      qc[k - db] = t;
      const Elem nt = F.Neg(t);
      for (int i = 0; i <= db; ++i) r[k - db + i] = F.Add(r[k - db + i], F.Mul(nt, b.c[i]));
    }
    r.resize(db);
    return {Poly(std::move(qc)), Poly(std::move(r))};
  }

  Poly Div(const Poly& a, const Poly& b) const { return DivMod(a, b).first; }

  Poly Mod(const Poly& a, const Poly& b) const {
    if (a.Deg() < b.Deg()) return a;
    return DivMod(a, b).second;
  }

  // Exact division; throws when b does not divide a.
  Poly DivExact(const Poly& a, const Poly& b) const {
    auto [q, r] = DivMod(a, b);
    if (!r.IsZero()) throw ArithmeticError("inexact polynomial division");
    return q;
  }

  bool Divides(const Poly& b, const Poly& a) const {
    if (b.IsZero()) return a.IsZero();
    return Mod(a, b).IsZero();
  }

  Poly Monic(const Poly& a) const {
    if (a.IsZero() || a.Lc() == 1) return a;
    return Scale(a, F_->Inv(a.Lc()));
  }

  Poly Gcd(Poly a, Poly b) const {
    while (!b.IsZero()) {
      Poly r = Mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return Monic(a);
  }

  Poly Lcm(const Poly& a, const Poly& b) const {
    if (a.IsZero() || b.IsZero()) return Poly();
    return Monic(Mul(Div(a, Gcd(a, b)), b));
  }

  // g = gcd(a, b) monic with u*a + v*b = g.
  XGcdResult XGcd(const Poly& a, const Poly& b) const {
    if (a.IsZero() && b.IsZero()) throw ArithmeticError("xgcd of two zero polynomials");
    Poly r0 = a, r1 = b, s0 = One(), s1 = Zero(), t0 = Zero(), t1 = One();
    while (!r1.IsZero()) {
      auto [q, r] = DivMod(r0, r1);
      r0 = std::move(r1);
      r1 = std::move(r);
      Poly s2 = Sub(s0, Mul(q, s1));
      s0 = std::move(s1);
      s1 = std::move(s2);
      Poly t2 = Sub(t0, Mul(q, t1));
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    const Elem inv = F_->Inv(r0.Lc());
    return {Scale(r0, inv), Scale(s0, inv), Scale(t0, inv)};
  }

  // Inverse of a modulo m; throws if not coprime.
  Poly InvMod(const Poly& a, const Poly& m) const {
    XGcdResult r = XGcd(Mod(a, m), m);
    if (!r.g.IsOne()) throw ArithmeticError("polynomial not invertible modulo m");
    return Mod(r.u, m);
  }

  Poly MulMod(const Poly& a, const Poly& b, const Poly& m) const { return Mod(Mul(a, b), m); }

  Poly PowMod(Poly a, std::uint64_t k, const Poly& m) const {
    Poly r = Mod(One(), m);
    a = Mod(a, m);
    while (k) {
      if (k & 1) r = MulMod(r, a, m);
      k >>= 1;
      if (k) a = MulMod(a, a, m);
    }
    return r;
  }

  Poly Pow(Poly a, std::uint64_t k) const {
    Poly r = One();
    while (k) {
      if (k & 1) r = Mul(r, a);
      k >>= 1;
      if (k) a = Mul(a, a);
    }
    return r;
  }

  Elem Eval(const Poly& a, Elem x) const {
    Elem r = 0;
    for (std::size_t i = a.c.size(); i-- > 0;) r = F_->Add(F_->Mul(r, x), a.c[i]);
    return r;
  }

  Poly Derivative(const Poly& a) const {
    if (a.c.size() <= 1) return Poly();
    std::vector<Elem> r(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i)
      r[i - 1] = F_->Mul(F_->FromInt(static_cast<std::int64_t>(i)), a.c[i]);
    return Poly(std::move(r));
  }

  // Reversal x^n * a(1/x) with n = deg a.
  Poly Reverse(const Poly& a) const {
    Poly r = a;
    std::reverse(r.c.begin(), r.c.end());
    r.Trim();
    return r;
  }

  // a(x)^q as a polynomial in x: applies Frobenius to coefficients and x.
  Poly FrobeniusPower(const Poly& a) const {
    if (a.IsZero()) return a;
    const std::uint32_t q = F_->q();
    std::vector<Elem> r(static_cast<std::size_t>(a.Deg()) * q + 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i * q] = F_->Pow(a.c[i], q);
    return Poly(std::move(r));
  }

  // Composition a(b(x)).
  Poly Compose(const Poly& a, const Poly& b) const {
    Poly r;
    for (std::size_t i = a.c.size(); i-- > 0;) r = Add(Mul(r, b), Const(a.c[i]));
    return r;
  }

  std::string ToString(const Poly& a, const std::string& var = "x") const {
    if (a.IsZero()) return "0";
    std::string s;
    for (std::size_t i = a.c.size(); i-- > 0;) {
      if (a.c[i] == 0) continue;
      std::string coef = F_->ToString(a.c[i]);
      if (!F_->IsPrimeField() && coef.find('+') != std::string::npos) coef = "(" + coef + ")";
      if (!s.empty()) s += " + ";
      if (i == 0) {
        s += coef;
      } else {
        if (a.c[i] != 1) s += coef + "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  const Fq* F_;
};

}  // namespace ffinfra
