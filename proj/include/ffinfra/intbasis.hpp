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
#include <optional>
#include <utility>
#include <vector>

#include "ffinfra/factor.hpp"
#include "ffinfra/ffield.hpp"
#include "ffinfra/kmatrix.hpp"
#include "ffinfra/polymatrix.hpp"

namespace ffinfra {

// Maximal orders of k[x][y]/(F) for monic F by the Round 2 method: an order
// is enlarged to the multiplier ring of its p-radical until that ring stops
// growing, for every p whose square divides the discriminant.
class Round2 {
 public:
  Round2(const PolyRing& R, std::vector<Poly> F) : R_(R), ops_(R), F_(std::move(F)), d_(static_cast<int>(F_.size()) - 1) {
    if (d_ < 1 || !F_.back().IsOne()) throw CurveError("Round 2 needs an equation monic in y");
  }

  int degree() const { return d_; }

  // det(Tr(y^{i+j})), with traces from Newton's identities.
  Poly Discriminant() const {
    std::vector<Poly> pw(2 * d_ - 1);
    pw[0] = R_.Const(R_.field().FromInt(d_));
    for (int k = 1; k < 2 * d_ - 1; ++k) {
      Poly s;
      if (k <= d_) s = R_.Scale(F_[d_ - k], R_.field().FromInt(k));
      for (int i = 1; i <= std::min(k - 1, d_); ++i) s = R_.Add(s, R_.Mul(F_[d_ - i], pw[k - i]));
      pw[k] = R_.Neg(s);
    }
    PolyMatrix T(d_, d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) T.at(i, j) = pw[i + j];
    return ops_.Det(T);
  }

  BasisRows EquationOrder() const { return BasisRows{PolyMatrix::Identity(d_), R_.One()}; }

  // Maximal order over k[x].
  BasisRows FiniteMaximalOrder() const {
    BasisRows O = EquationOrder();
    Factorizer fac(R_);
    for (auto& t : fac.Factor(Discriminant()).terms)
      if (t.multiplicity >= 2) O = MaximalAt(t.factor, O);
    return O;
  }

  // The p-maximal overorder of O.
  BasisRows MaximalAt(const Poly& p, BasisRows O) const {
    for (;;) {
      auto next = Enlarge(p, O);
      if (!next) return O;
      O = std::move(*next);
    }
  }

 private:
  using Coords = std::vector<Poly>;

  // Product of power-basis numerators modulo F.
  std::vector<Poly> MulPow(const std::vector<Poly>& a, const std::vector<Poly>& b) const {
    std::vector<Poly> c(2 * d_ - 1);
    for (int i = 0; i < d_; ++i) {
      if (a[i].IsZero()) continue;
      for (int j = 0; j < d_; ++j)
        if (!b[j].IsZero()) c[i + j] = R_.Add(c[i + j], R_.Mul(a[i], b[j]));
    }
    for (int k = 2 * d_ - 2; k >= d_; --k) {
      if (c[k].IsZero()) continue;
      for (int j = 0; j < d_; ++j) c[k - d_ + j] = R_.Sub(c[k - d_ + j], R_.Mul(c[k], F_[j]));
      c[k] = Poly();
    }
    c.resize(d_);
    return c;
  }

  // u with u * H = t for upper triangular H; exact division is required.
  Coords Solve(const PolyMatrix& H, Coords t) const {
    Coords u(d_);
    for (int i = 0; i < d_; ++i) {
      auto [q, r] = R_.DivMod(t[i], H.at(i, i));
      if (!r.IsZero()) throw CurveError("Round 2: element outside the lattice");
      u[i] = q;
      for (int j = i; j < d_; ++j)
        if (!H.at(i, j).IsZero()) t[j] = R_.Sub(t[j], R_.Mul(q, H.at(i, j)));
    }
    return u;
  }

  struct Table {
    const Round2* self;
    std::vector<Coords> c;  // c[i * d + j] = coordinates of b_i b_j
    Coords Mul(const Coords& u, const Coords& v, const Poly* mod) const {
      const int d = self->d_;
      const PolyRing& R = self->R_;
      Coords w(d);
      for (int i = 0; i < d; ++i) {
        if (u[i].IsZero()) continue;
        for (int j = 0; j < d; ++j) {
          if (v[j].IsZero()) continue;
          const Poly uv = R.Mul(u[i], v[j]);
          for (int k = 0; k < d; ++k)
            if (!c[i * d + j][k].IsZero()) w[k] = R.Add(w[k], R.Mul(uv, c[i * d + j][k]));
        }
      }
      if (mod)
        for (auto& x : w) x = R.Mod(x, *mod);
      return w;
    }
  };

  Table MultiplicationTable(const BasisRows& O) const {
    Table T{this, std::vector<Coords>(static_cast<std::size_t>(d_) * d_)};
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        std::vector<Poly> prod = MulPow(O.num.Row(i), O.num.Row(j));
        for (auto& e : prod) {
          auto [q, r] = R_.DivMod(e, O.den);
          if (!r.IsZero()) throw CurveError("Round 2: basis is not closed under multiplication");
          e = q;
        }
        T.c[i * d_ + j] = Solve(O.num, prod);
      }
    return T;
  }

  // F_q-coordinates of O/pO: position i * f + k holds the x^k coefficient of u_i.
  KVec Encode(const Coords& u, int f) const {
    KVec v(static_cast<std::size_t>(d_) * f, 0);
    for (int i = 0; i < d_; ++i)
      for (int k = 0; k < f; ++k) v[i * f + k] = u[i].Coeff(k);
    return v;
  }

  Coords Decode(const KVec& v, int f) const {
    Coords u(d_);
    for (int i = 0; i < d_; ++i) u[i] = Poly(std::vector<Elem>(v.begin() + i * f, v.begin() + (i + 1) * f));
    return u;
  }

  Coords BasisElement(int idx, int f) const {
    Coords u(d_);
    u[idx / f] = R_.Monomial(1, idx % f);
    return u;
  }

  std::optional<BasisRows> Enlarge(const Poly& p, const BasisRows& O) const {
    const Fq& F = R_.field();
    const KLinear L(F);
    const int f = p.Deg();
    const int N = d_ * f;
    const Table T = MultiplicationTable(O);

    // Radical of O/pO: kernel of the m-th power of Frobenius with q^m >= N.
    std::vector<KVec> A;
    for (int b = 0; b < N; ++b) {
      Coords base = BasisElement(b, f), acc;
      bool have = false;
      for (std::uint64_t e = F.q(); e; e >>= 1) {
        if (e & 1) {
          acc = have ? T.Mul(acc, base, &p) : base;
          have = true;
        }
        if (e > 1) base = T.Mul(base, base, &p);
      }
      A.push_back(Encode(acc, f));
    }
    std::vector<KVec> Am = A;
    for (std::uint64_t qm = F.q(); qm < static_cast<std::uint64_t>(N); qm *= F.q()) Am = L.MatMul(Am, A);
    std::vector<KVec> rad = L.LeftKernel(Am);

    PolyMatrix rows(static_cast<int>(rad.size()), d_);
    for (std::size_t r = 0; r < rad.size(); ++r) rows.SetRow(static_cast<int>(r), Decode(rad[r], f));
    const PolyMatrix I = ops_.HnfModular(rows, p);

    // b in O/pO with b * I inside p * I.
    std::vector<KVec> cond;
    for (int b = 0; b < N; ++b) {
      const Coords eb = BasisElement(b, f);
      KVec row;
      for (int l = 0; l < d_; ++l) {
        Coords w = Solve(I, T.Mul(eb, I.Row(l), nullptr));
        for (auto& x : w) x = R_.Mod(x, p);
        KVec enc = Encode(w, f);
        row.insert(row.end(), enc.begin(), enc.end());
      }
      cond.push_back(std::move(row));
    }
    std::vector<KVec> U = L.LeftKernel(cond);
    if (U.empty()) return std::nullopt;

    PolyMatrix lift(static_cast<int>(U.size()), d_);
    for (std::size_t r = 0; r < U.size(); ++r) lift.SetRow(static_cast<int>(r), Decode(U[r], f));
    const PolyMatrix H = ops_.HnfModular(lift, p);
    BasisRows next{ops_.Mul(H, O.num), R_.Mul(O.den, p)};
    Normalize(next);
    return next;
  }

 public:
  // Hermite form of the numerator rows with the common content removed.
  void Normalize(BasisRows& B) const {
    B.num = ops_.Hnf(B.num).H;
    Poly g = B.den;
    for (auto& e : B.num.a)
      if (!e.IsZero()) g = R_.Gcd(g, e);
    if (!g.IsOne()) {
      B.den = R_.Div(B.den, g);
      for (auto& e : B.num.a) e = R_.Div(e, g);
    }
    const Elem lc = B.den.Lc();
    if (lc != 1) {
      const Elem inv = R_.field().Inv(lc);
      B.den = R_.Scale(B.den, inv);
      for (auto& e : B.num.a) e = R_.Scale(e, inv);
    }
  }

 private:
  const PolyRing& R_;
  PolyMatrixOps ops_;
  std::vector<Poly> F_;
  int d_;
};

// Basis of O_inf in terms of y over k[x]: with z = 1/x and w = z^s y the
// equation becomes monic in w over k[z], and the z-maximal order is mapped back.
inline BasisRows InfiniteMaximalOrder(const PolyRing& R, const std::vector<Poly>& F) {
  const int d = static_cast<int>(F.size()) - 1;
  int s = 0;
  for (int j = 0; j < d; ++j)
    if (!F[j].IsZero()) s = std::max(s, (F[j].Deg() + (d - j) - 1) / (d - j));
  std::vector<Poly> G(d + 1);
  for (int j = 0; j <= d; ++j) {
    if (F[j].IsZero()) continue;
    G[j] = R.ShiftUp(R.Reverse(F[j]), s * (d - j) - F[j].Deg());
  }
  Round2 r2(R, G);
  BasisRows Oz = r2.MaximalAt(R.X(), r2.EquationOrder());
  const int e = Oz.den.Deg();
  int M = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (!Oz.num.at(i, j).IsZero()) M = std::max(M, Oz.num.at(i, j).Deg() + s * j);
  BasisRows out{PolyMatrix(d, d), R.Monomial(1, M)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Poly& n = Oz.num.at(i, j);
      if (n.IsZero()) continue;
      out.num.at(i, j) = R.ShiftUp(R.Reverse(n), M - s * j - n.Deg() + e);
    }
  // Remove the common power of x.
  int common = M;
  for (auto& c : out.num.a)
    if (!c.IsZero()) {
      int low = 0;
      while (c.Coeff(low) == 0) ++low;
      common = std::min(common, low);
    }
  if (common > 0) {
    out.den = R.Monomial(1, M - common);
    for (auto& c : out.num.a)
      if (!c.IsZero()) c = Poly(std::vector<Elem>(c.c.begin() + common, c.c.end()));
  }
  return out;
}

}  // namespace ffinfra
