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

#include <climits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ffinfra/ideals.hpp"

namespace ffinfra {

// A k-basis of B(a, t) = {h in a : nu_i(h) >= -t_i for every infinite place}.
struct BoxBasis {
  std::vector<FFElement> elements;
  std::vector<int> t;

  int dim() const { return static_cast<int>(elements.size()); }
  bool empty() const { return elements.empty(); }
};

class Boxes {
 public:
  explicit Boxes(const IdealOps& ideals) : I_(ideals), K_(ideals.field()), R_(K_.R()) {}

  const IdealOps& ideals() const { return I_; }

  // B(a, t) via a row-reduced k[x]-basis of a twisted by the shift element w_t.
  BoxBasis RrSpace(const FracIdeal& a, const std::vector<int>& t) const {
    const int d = K_.degree();
    const RatMatrix W = K_.ShiftMatrix(t);
    PolyMatrix M = K_.ops().Mul(a.hnf, W.num);
    const int budget = R_.Mul(a.den, W.den).Deg();
    PolyMatrix U = PolyMatrix::Identity(d);
    std::vector<int> deg = K_.ops().RowReduce(M, std::vector<int>(d, 0), &U);
    BoxBasis B;
    B.t = t;
    for (int i = 0; i < d; ++i) {
      const int top = budget - deg[i];
      if (top < 0) continue;
      FFElement b{K_.ops().Mul(RowMatrix(U, i), a.hnf).Row(0), a.den};
      K_.co().Normalize(b);
      for (int k = 0; k <= top; ++k) B.elements.push_back(K_.co().ScaleRat(b, R_.Monomial(1, k), R_.One()));
    }
    return B;
  }

  BoxBasis RrSpace(const DivisorData& D) const { return RrSpace(D.finite, D.infinite); }

  int Dimension(const FracIdeal& a, const std::vector<int>& t) const { return RrSpace(a, t).dim(); }

  // ceil(-(deg divisor(a) + sum t_i deg p_i) / deg p_{n+1}).
  long long EllLowerBound(const FracIdeal& a, const std::vector<int>& t) const {
    long long s = I_.DegDivisor(a);
    for (std::size_t i = 0; i < t.size(); ++i) s += static_cast<long long>(t[i]) * K_.places()[i].degree;
    const long long dn = K_.distinguished().degree;
    const long long num = -s;
    return num >= 0 ? (num + dn - 1) / dn : -((-num) / dn);
  }

  // Smallest l with B(a, (t, l)) != 0, and that box.
  std::pair<int, BoxBasis> MinEll(const FracIdeal& a, const std::vector<int>& t) const {
    if (static_cast<int>(t.size()) != K_.unit_rank()) throw std::invalid_argument("min_ell: t must have length n");
    std::vector<int> full = t;
    full.push_back(static_cast<int>(EllLowerBound(a, t)));
    const int limit = full.back() + K_.genus() + K_.distinguished().degree + 1;
    for (; full.back() <= limit; ++full.back()) {
      BoxBasis B = RrSpace(a, full);
      if (!B.empty()) return {full.back(), std::move(B)};
    }
    throw std::logic_error("min_ell: no nonzero box within the Riemann bound");
  }

  // A nonzero element of the span that is minimal for the lexicographic order
  // on (-nu_{n+1} deg p_{n+1}, -nu_1 deg p_1, ..., -nu_n deg p_n).
  FFElement SmallestWrtLeq(const BoxBasis& B) const { return MinimalStratum(B).elements.front(); }

  // The subspace of span(B) whose nonzero elements are exactly the minimal
  // ones; every such element h has nu_i(h) = -t_i for the returned t.
  BoxBasis MinimalStratum(const BoxBasis& B) const {
    if (B.empty()) throw std::invalid_argument("smallest_wrt_leq: empty box");
    const int m = static_cast<int>(K_.places().size());
    std::vector<FFElement> span = B.elements;
    std::vector<int> t = B.t;
    std::vector<int> order;
    order.push_back(m - 1);
    for (int i = 0; i + 1 < m; ++i) order.push_back(i);
    for (int i : order) {
      int best = INT_MIN;
      for (auto& h : span) best = std::max(best, K_.Valuation(h, i));
      t[i] = std::min(t[i], -best);
      for (;;) {
        std::vector<int> tt = t;
        --tt[i];
        std::vector<FFElement> sub = SubspaceInBox(span, tt);
        if (sub.empty()) break;
        span = std::move(sub);
        t = std::move(tt);
      }
      span = SubspaceInBox(span, t);
    }
    return BoxBasis{std::move(span), std::move(t)};
  }

  // Basis (in RREF order with respect to `span`) of the elements of span(span)
  // lying in I_inf(t).
  std::vector<FFElement> SubspaceInBox(const std::vector<FFElement>& span, const std::vector<int>& t) const {
    const RatMatrix W = K_.ShiftMatrix(t);
    const int r = static_cast<int>(span.size());
    // Polar parts at infinity are additive; collect their coefficients per element.
    std::vector<std::vector<Poly>> polar(r);
    int width = 0;
    for (int j = 0; j < r; ++j) {
      CoordVec v = K_.co().VecMat(span[j], W);
      for (auto& c : v.num) {
        Poly q = R_.Div(c, v.den);
        polar[j].push_back(q);
        width = std::max(width, q.Deg());
      }
    }
    std::vector<KVec> rows(r);
    for (int j = 0; j < r; ++j) {
      for (auto& q : polar[j])
        for (int e = 1; e <= width; ++e) rows[j].push_back(q.Coeff(e));
      if (rows[j].empty()) rows[j].push_back(0);
    }
    std::vector<KVec> ker = K_.klin().LeftKernel(rows);
    std::vector<FFElement> out;
    for (auto& c : ker) out.push_back(Combine(span, c));
    return out;
  }

  FFElement Combine(const std::vector<FFElement>& span, const KVec& c) const {
    FFElement h = K_.Zero();
    for (std::size_t j = 0; j < span.size(); ++j)
      if (c[j] != 0) h = K_.Add(h, K_.ScaleConst(span[j], c[j]));
    return h;
  }

  // Genus confirmed by dim L(m p_{n+1}) = m deg p_{n+1} + 1 - g for three consecutive m.
  int GenusByRiemannRoch() const {
    const int g = K_.genus();
    const int dn = K_.distinguished().degree;
    const int m0 = (2 * g - 2) / dn + 1 > 0 ? (2 * g - 2) / dn + 1 : 0;
    std::vector<int> t(K_.places().size(), 0);
    for (int m = m0; m < m0 + 3; ++m) {
      t.back() = m;
      const int dim = Dimension(I_.Unit(), t);
      if (dim != m * dn + 1 - g) throw CurveError("Riemann-Roch check failed; the bases are not maximal");
    }
    return g;
  }

 private:
  static PolyMatrix RowMatrix(const PolyMatrix& U, int i) {
    PolyMatrix r(1, U.cols);
    r.SetRow(0, U.Row(i));
    return r;
  }

  const IdealOps& I_;
  const FunctionField& K_;
  const PolyRing& R_;
};

}  // namespace ffinfra
