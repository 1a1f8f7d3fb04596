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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffinfra/bytes.hpp"
#include "ffinfra/ffield.hpp"

namespace ffinfra {

// A fractional O_K-ideal N / den: the rows of N (Hermite normal form) are the
// integral-basis coordinates of a k[x]-basis of den * a.
struct FracIdeal {
  PolyMatrix hnf;
  Poly den = Poly({1});
  bool operator==(const FracIdeal&) const = default;
};

// Finite part plus infinite coefficients (t_1, ..., t_{n+1}).
struct DivisorData {
  FracIdeal finite;
  std::vector<int> infinite;
};

inline constexpr std::uint8_t kIdealEncodingVersion = 1;

class IdealOps {
 public:
  explicit IdealOps(const FunctionField& K) : K_(K), R_(K.R()), ops_(K.ops()) {}

  const FunctionField& field() const { return K_; }

  FracIdeal Unit() const { return FracIdeal{PolyMatrix::Identity(K_.degree()), R_.One()}; }

  // Canonical form of the ideal spanned over k[x] by the rows of `rows` / den.
  // The rows must already span an O_K-module of full rank.
  FracIdeal FromLattice(const PolyMatrix& rows, const Poly& den) const {
    FracIdeal a{rows.rows == rows.cols ? ops_.Hnf(rows).H : ops_.HnfBasis(rows), den};
    Normalize(a);
    return a;
  }

  // As FromLattice, with D * k[x]^d contained in the row lattice.
  FracIdeal FromLatticeModular(const PolyMatrix& rows, const Poly& den, const Poly& D) const {
    FracIdeal a{ops_.HnfModular(rows, D), den};
    Normalize(a);
    return a;
  }

  // The O_K-ideal generated by the given nonzero elements.
  FracIdeal Generated(const std::vector<FFElement>& gens) const {
    const int d = K_.degree();
    Poly L = R_.One();
    std::vector<RatMatrix> ms;
    for (auto& g : gens) {
      if (g.IsZero()) continue;
      ms.push_back(K_.MulMatrix(g));
      L = R_.Lcm(L, ms.back().den);
    }
    if (ms.empty()) throw ArithmeticError("ideal generated by zero");
    PolyMatrix rows(static_cast<int>(ms.size()) * d, d);
    int r = 0;
    for (auto& m : ms) {
      const Poly f = R_.Div(L, m.den);
      for (int i = 0; i < d; ++i, ++r)
        for (int j = 0; j < d; ++j) rows.at(r, j) = R_.Mul(m.num.at(i, j), f);
    }
    return FromLattice(rows, L);
  }

  FracIdeal Principal(const FFElement& h) const {
    if (h.IsZero()) throw ArithmeticError("principal ideal of zero");
    RatMatrix m = K_.MulMatrix(h);
    return FromLattice(m.num, m.den);
  }

  // Basis element i of the ideal as an element of K.
  FFElement BasisElement(const FracIdeal& a, int i) const {
    FFElement h{a.hnf.Row(i), a.den};
    K_.co().Normalize(h);
    return h;
  }

  Poly NumeratorNorm(const FracIdeal& a) const {
    Poly n = R_.One();
    for (int i = 0; i < a.hnf.rows; ++i) n = R_.Mul(n, a.hnf.at(i, i));
    return n;
  }

  FracIdeal Mul(const FracIdeal& a, const FracIdeal& b) const {
    const int d = K_.degree();
    PolyMatrix rows(d * d, d);
    for (int i = 0; i < d; ++i) {
      FFElement ai{a.hnf.Row(i), R_.One()};
      PolyMatrix prod = ops_.Mul(b.hnf, K_.MulMatrix(ai).num);
      for (int j = 0; j < d; ++j) rows.SetRow(i * d + j, prod.Row(j));
    }
    const Poly D = R_.Mul(NumeratorNorm(a), NumeratorNorm(b));
    return FromLatticeModular(rows, R_.Mul(a.den, b.den), D);
  }

  FracIdeal Inv(const FracIdeal& a) const {
    const int d = K_.degree();
    // Dual of the column lattice of [M(n_1) | ... | M(n_d)] for the numerator basis n_i.
    PolyMatrix ct(d * d, d);
    for (int i = 0; i < d; ++i) {
      FFElement ni{a.hnf.Row(i), R_.One()};
      PolyMatrix m = K_.MulMatrix(ni).num;
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) ct.at(i * d + k, j) = m.at(j, k);
    }
    PolyMatrix G = ops_.HnfModular(ct, NumeratorNorm(a));
    auto [Y, D] = ops_.InverseScaled(G.Transpose());
    // (numerator)^{-1} = rows(Y) / D, and a^{-1} = den * (numerator)^{-1}.
    PolyMatrix scaled = ops_.Scale(Y, a.den);
    return FromLattice(scaled, D);
  }

  FracIdeal Div(const FracIdeal& a, const FracIdeal& b) const { return Mul(a, Inv(b)); }

  FracIdeal Pow(const FracIdeal& a, long long e) const {
    FracIdeal base = e < 0 ? Inv(a) : a;
    unsigned long long k = e < 0 ? -static_cast<unsigned long long>(e) : e;
    FracIdeal r = Unit();
    while (k) {
      if (k & 1) r = Mul(r, base);
      k >>= 1;
      if (k) base = Mul(base, base);
    }
    return r;
  }

  // h * a.
  FracIdeal MulElement(const FracIdeal& a, const FFElement& h) const {
    if (h.IsZero()) throw ArithmeticError("ideal times zero");
    RatMatrix m = K_.MulMatrix(h);
    return FromLattice(ops_.Mul(a.hnf, m.num), R_.Mul(a.den, m.den));
  }

  FracIdeal DivElement(const FracIdeal& a, const FFElement& h) const { return MulElement(a, K_.Inv(h)); }

  bool Contains(const FracIdeal& a, const FFElement& h) const {
    if (h.IsZero()) return true;
    // Solve u * hnf = h * den with u polynomial; hnf is upper triangular.
    const int d = K_.degree();
    std::vector<Poly> target(d);
    for (int j = 0; j < d; ++j) target[j] = R_.Mul(h.num[j], a.den);
    for (auto& t : target) {
      auto [q, r] = R_.DivMod(t, h.den);
      if (!r.IsZero()) return false;
      t = std::move(q);
    }
    for (int i = 0; i < d; ++i) {
      auto [u, r] = R_.DivMod(target[i], a.hnf.at(i, i));
      if (!r.IsZero()) return false;
      for (int j = i; j < d; ++j)
        if (!a.hnf.at(i, j).IsZero()) target[j] = R_.Sub(target[j], R_.Mul(u, a.hnf.at(i, j)));
    }
    return true;
  }

  bool IsIntegral(const FracIdeal& a) const { return a.den.IsOne(); }

  // -deg Norm(a).
  long long DegDivisor(const FracIdeal& a) const {
    long long s = 0;
    for (int i = 0; i < a.hnf.rows; ++i) s += a.hnf.at(i, i).Deg();
    return -(s - static_cast<long long>(K_.degree()) * a.den.Deg());
  }

  // Version byte, field digest, then the length-prefixed denominator and HNF
  // entries in row-major order; coefficients little endian per F_q coordinate.
  std::string CanonicalBytes(const FracIdeal& a) const {
    ByteWriter w;
    w.U8(kIdealEncodingVersion);
    w.U64(K_.digest());
    w.Polynomial(K_.k(), a.den);
    w.U32(static_cast<std::uint32_t>(a.hnf.rows));
    for (auto& e : a.hnf.a) w.Polynomial(K_.k(), e);
    return w.Take();
  }

  // Inverse of CanonicalBytes; rejects foreign digests and non-canonical input.
  FracIdeal FromCanonicalBytes(const std::string& bytes) const {
    ByteReader r(bytes);
    if (r.U8() != kIdealEncodingVersion) throw std::invalid_argument("unsupported ideal encoding version");
    if (r.U64() != K_.digest()) throw std::invalid_argument("ideal belongs to a different field");
    FracIdeal a;
    a.den = r.Polynomial(K_.k());
    const int d = static_cast<int>(r.U32());
    if (d != K_.degree()) throw std::invalid_argument("ideal dimension mismatch");
    a.hnf = PolyMatrix(d, d);
    for (auto& e : a.hnf.a) e = r.Polynomial(K_.k());
    if (!r.done()) throw std::invalid_argument("trailing bytes after ideal");
    FracIdeal c = FromLattice(a.hnf, a.den);
    if (!(c == a)) throw std::invalid_argument("ideal bytes are not in canonical form");
    return c;
  }

  // The prime (x - c, y - r) for a simple root r of F(c, y); its degree is checked.
  std::optional<FracIdeal> DegreeOnePrime(Elem c, Elem r) const {
    const int d = K_.degree();
    FFElement yr = K_.Sub(K_.Y(), K_.FromPoly(R_.Const(r)));
    RatMatrix m = K_.MulMatrix(yr);
    if (!m.den.IsOne()) return std::nullopt;
    const Poly lin = R_.Linear(c);
    PolyMatrix rows(2 * d, d);
    for (int i = 0; i < d; ++i) {
      rows.at(i, i) = lin;
      for (int j = 0; j < d; ++j) rows.at(d + i, j) = m.num.at(i, j);
    }
    FracIdeal P = FromLatticeModular(rows, R_.One(), R_.Pow(lin, d));
    if (DegDivisor(P) != -1) return std::nullopt;
    return P;
  }

  // Degree-one finite primes from simple roots of F(c, y), in order of (c, r).
  std::vector<FracIdeal> DegreeOnePrimes(std::size_t limit) const {
    std::vector<FracIdeal> out;
    const Fq& F = K_.k();
    const auto& eq = K_.input().equation;
    Factorizer fac(R_, 0x1de);
    for (std::uint64_t c = 0; c < F.q() && out.size() < limit; ++c) {
      std::vector<Elem> co(eq.size());
      for (std::size_t j = 0; j < eq.size(); ++j) co[j] = R_.Eval(eq[j], static_cast<Elem>(c));
      const Poly fc(co);
      const Poly dfc = R_.Derivative(fc);
      for (Elem r : fac.Roots(fc)) {
        if (R_.Eval(dfc, r) == 0) continue;
        if (auto P = DegreeOnePrime(static_cast<Elem>(c), r)) {
          out.push_back(std::move(*P));
          if (out.size() >= limit) break;
        }
      }
    }
    return out;
  }

 private:
  void Normalize(FracIdeal& a) const {
    if (a.den.IsZero()) throw ArithmeticError("zero ideal denominator");
    Poly g = a.den;
    for (auto& e : a.hnf.a) {
      if (g.IsOne()) break;
      if (!e.IsZero()) g = R_.Gcd(g, e);
    }
    if (!g.IsOne()) {
      a.den = R_.Div(a.den, g);
      for (auto& e : a.hnf.a) e = R_.Div(e, g);
    }
    // Constant factors are units, so the lattice is unchanged by this.
    a.den = R_.Monic(a.den);
  }

  const FunctionField& K_;
  const PolyRing& R_;
  const PolyMatrixOps& ops_;
};

}  // namespace ffinfra
