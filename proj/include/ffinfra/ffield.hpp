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
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffinfra/bytes.hpp"
#include "ffinfra/factor.hpp"
#include "ffinfra/fq.hpp"
#include "ffinfra/kmatrix.hpp"
#include "ffinfra/poly.hpp"
#include "ffinfra/polymatrix.hpp"

namespace ffinfra {

class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vector over k(x) stored as numerators over one monic common denominator.
struct CoordVec {
  std::vector<Poly> num;
  Poly den = Poly({1});

  bool IsZero() const {
    for (auto& p : num)
      if (!p.IsZero()) return false;
    return true;
  }
  bool operator==(const CoordVec&) const = default;
};

// Elements of K in coordinates with respect to the integral basis of O_K.
using FFElement = CoordVec;

// A matrix over k(x) as a polynomial matrix divided by a monic polynomial.
struct RatMatrix {
  PolyMatrix num;
  Poly den = Poly({1});
};

class CoordOps {
 public:
  explicit CoordOps(const PolyRing& ring) : R_(ring) {}

  void Normalize(CoordVec& v) const {
    if (v.den.IsZero()) throw ArithmeticError("zero denominator");
    if (v.IsZero()) {
      v.den = R_.One();
      return;
    }
    Poly g = v.den;
    for (auto& p : v.num) {
      if (g.IsOne()) break;
      if (!p.IsZero()) g = R_.Gcd(g, p);
    }
    if (!g.IsOne()) {
      v.den = R_.Div(v.den, g);
      for (auto& p : v.num) p = R_.Div(p, g);
    }
    const Elem lc = v.den.Lc();
    if (lc != 1) {
      const Elem inv = R_.field().Inv(lc);
      v.den = R_.Scale(v.den, inv);
      for (auto& p : v.num) p = R_.Scale(p, inv);
    }
  }

  void Normalize(RatMatrix& m) const {
    CoordVec v{m.num.a, m.den};
    Normalize(v);
    m.num.a = std::move(v.num);
    m.den = std::move(v.den);
  }

  CoordVec VecMat(const CoordVec& v, const RatMatrix& M) const {
    CoordVec r;
    r.num.assign(M.num.cols, Poly());
    for (int i = 0; i < M.num.rows; ++i) {
      if (v.num[i].IsZero()) continue;
      for (int j = 0; j < M.num.cols; ++j) {
        const Poly& e = M.num.at(i, j);
        if (!e.IsZero()) r.num[j] = R_.Add(r.num[j], R_.Mul(v.num[i], e));
      }
    }
    r.den = R_.Mul(v.den, M.den);
    Normalize(r);
    return r;
  }

  RatMatrix MatMul(const RatMatrix& A, const RatMatrix& B, const PolyMatrixOps& ops) const {
    RatMatrix C{ops.Mul(A.num, B.num), R_.Mul(A.den, B.den)};
    Normalize(C);
    return C;
  }

  CoordVec Add(const CoordVec& a, const CoordVec& b) const { return Combine(a, b, false); }
  CoordVec Sub(const CoordVec& a, const CoordVec& b) const { return Combine(a, b, true); }

  CoordVec Neg(CoordVec a) const {
    for (auto& p : a.num) p = R_.Neg(p);
    return a;
  }

  // a * (n / m) for polynomials n, m with m != 0.
  CoordVec ScaleRat(CoordVec a, const Poly& n, const Poly& m) const {
    for (auto& p : a.num) p = R_.Mul(p, n);
    a.den = R_.Mul(a.den, m);
    Normalize(a);
    return a;
  }

  CoordVec Unit(int d, int i, Elem c = 1) const {
    CoordVec v;
    v.num.assign(d, Poly());
    v.num[i] = R_.Const(c);
    return v;
  }

 private:
  CoordVec Combine(const CoordVec& a, const CoordVec& b, bool sub) const {
    const Poly g = R_.Gcd(a.den, b.den);
    const Poly fa = R_.Div(b.den, g), fb = R_.Div(a.den, g);
    CoordVec r;
    r.num.resize(a.num.size());
    for (std::size_t i = 0; i < a.num.size(); ++i) {
      Poly x = R_.Mul(a.num[i], fa), y = R_.Mul(b.num[i], fb);
      r.num[i] = sub ? R_.Sub(x, y) : R_.Add(x, y);
    }
    r.den = R_.Mul(a.den, fa);
    Normalize(r);
    return r;
  }

  const PolyRing& R_;
};

// The value at z = 1/x of num/den; throws if the function has a pole there.
inline Elem ValueAtInfinity(const PolyRing& R, const Poly& num, const Poly& den) {
  if (num.IsZero() || num.Deg() < den.Deg()) return 0;
  if (num.Deg() > den.Deg()) throw ArithmeticError("pole at infinity");
  return R.field().Div(num.Lc(), den.Lc());
}

// Order of vanishing at z = 1/x of num/den (INT_MAX for zero).
inline int OrdInfinity(const Poly& num, const Poly& den) {
  return num.IsZero() ? INT_MAX : den.Deg() - num.Deg();
}

// A free k[x]- or k[1/x]-algebra of rank d given by structure constants:
// b_i * b_j = sum_k c[(i*d + j)*d + k] b_k / cden.
class StructAlgebra {
 public:
  StructAlgebra() = default;
  StructAlgebra(int d, std::vector<Poly> c, Poly cden) : d_(d), c_(std::move(c)), cden_(std::move(cden)) {}

  int dim() const { return d_; }
  const Poly& Const(int i, int j, int k) const { return c_[(i * d_ + j) * d_ + k]; }
  const Poly& den() const { return cden_; }

  // Row j holds the coordinates of h * b_j.
  RatMatrix MulMatrix(const PolyRing& R, const CoordOps& co, const CoordVec& h) const {
    RatMatrix M{PolyMatrix(d_, d_), R.Mul(h.den, cden_)};
    for (int i = 0; i < d_; ++i) {
      const Poly& hi = h.num[i];
      if (hi.IsZero()) continue;
      for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k) {
          const Poly& c = Const(i, j, k);
          if (!c.IsZero()) M.num.at(j, k) = R.Add(M.num.at(j, k), R.Mul(hi, c));
        }
    }
    co.Normalize(M);
    return M;
  }

  CoordVec Mul(const PolyRing& R, const CoordOps& co, const CoordVec& a, const CoordVec& b) const {
    return co.VecMat(b, MulMatrix(R, co, a));
  }

 private:
  int d_ = 0;
  std::vector<Poly> c_;
  Poly cden_;
};

struct InfinitePlace {
  int index = 0;         // 1-based position; index n+1 is the distinguished place
  int degree = 0;        // residue degree over k
  int ram_index = 0;     // ramification index over the place 1/x of k(x)
  // RREF basis of P / (1/x)O_inf inside O_inf / (1/x)O_inf, infinite-basis coordinates.
  std::vector<KVec> prime_rref;
  std::vector<int> prime_pivots;
  KVec idempotent;
  CoordVec uniformizer;       // infinite-basis coordinates; valuation 1 here, 0 at other infinite places
  CoordVec anti_uniformizer;  // infinite-basis coordinates; valuation -1 here, 0 at other infinite places
  RatMatrix anti_mult;        // multiplication by the anti-uniformizer in the infinite basis
  std::string bytes;          // canonical serialization used for ordering
};

// Basis element i is (sum_j num(i, j) y^j) / den.
struct BasisRows {
  PolyMatrix num;
  Poly den = Poly({1});
};

struct FieldInput {
  std::string name;
  FieldSpec base;
  std::vector<Poly> equation;  // coefficients in y, ascending; the last one must be 1
  BasisRows finite;
  BasisRows infinite;
  int distinguished = 0;  // 1-based position in the sorted place list to use as p_{n+1}; 0 = default rule
};

// The function field K = k(x)[y]/(F) with maximal orders O_K (over k[x]) and
// O_inf (over k[1/x]) given by bases, its infinite places and genus.
// Immutable after construction except for an internal cache guarded by a mutex.
class FunctionField {
 public:
  explicit FunctionField(FieldInput in) : input_(std::move(in)) {
    field_ = std::make_unique<Fq>(input_.base);
    ring_ = std::make_unique<PolyRing>(*field_);
    ops_ = std::make_unique<PolyMatrixOps>(*ring_);
    co_ = std::make_unique<CoordOps>(*ring_);
    klin_ = std::make_unique<KLinear>(*field_);
    Setup();
  }
  FunctionField(const FunctionField&) = delete;
  FunctionField& operator=(const FunctionField&) = delete;

  const std::string& name() const { return input_.name; }
  const FieldInput& input() const { return input_; }
  const Fq& k() const { return *field_; }
  const PolyRing& R() const { return *ring_; }
  const PolyMatrixOps& ops() const { return *ops_; }
  const CoordOps& co() const { return *co_; }
  const KLinear& klin() const { return *klin_; }
  int degree() const { return d_; }
  int genus() const { return genus_; }
  int unit_rank() const { return static_cast<int>(places_.size()) - 1; }
  const std::vector<InfinitePlace>& places() const { return places_; }
  const InfinitePlace& distinguished() const { return places_.back(); }
  std::uint64_t digest() const { return digest_; }
  const StructAlgebra& finite_algebra() const { return fin_alg_; }
  const StructAlgebra& infinite_algebra() const { return inf_alg_; }
  const Poly& finite_discriminant() const { return disc_fin_; }

  // ---- elements -------------------------------------------------------

  FFElement Zero() const {
    FFElement z;
    z.num.assign(d_, Poly());
    return z;
  }
  FFElement One() const { return one_; }
  FFElement FromPoly(const Poly& f) const { return co_->ScaleRat(one_, f, ring_->One()); }
  FFElement FromRat(const Poly& n, const Poly& m) const { return co_->ScaleRat(one_, n, m); }
  FFElement X() const { return FromPoly(ring_->X()); }
  FFElement Y() const { return FromPower(co_->Unit(d_, std::min(1, d_ - 1))); }
  FFElement Basis(int i) const { return co_->Unit(d_, i); }

  // Conversion from and to coordinates in the power basis 1, y, ..., y^{d-1}.
  FFElement FromPower(const CoordVec& v) const { return co_->VecMat(v, pow_to_omega_); }
  CoordVec ToPower(const FFElement& h) const { return co_->VecMat(h, omega_); }

  FFElement Add(const FFElement& a, const FFElement& b) const { return co_->Add(a, b); }
  FFElement Sub(const FFElement& a, const FFElement& b) const { return co_->Sub(a, b); }
  FFElement Neg(const FFElement& a) const { return co_->Neg(a); }
  FFElement Mul(const FFElement& a, const FFElement& b) const { return fin_alg_.Mul(*ring_, *co_, a, b); }
  FFElement ScaleConst(const FFElement& a, Elem c) const {
    return co_->ScaleRat(a, ring_->Const(c), ring_->One());
  }

  // Row j holds the coordinates of h * omega_j.
  RatMatrix MulMatrix(const FFElement& h) const { return fin_alg_.MulMatrix(*ring_, *co_, h); }

  FFElement Inv(const FFElement& h) const {
    if (h.IsZero()) throw ArithmeticError("inverse of zero element");
    RatMatrix M = MulMatrix(h);
    auto [Y, D] = ops_->InverseScaled(M.num);
    return co_->ScaleRat(co_->VecMat(one_, RatMatrix{std::move(Y), D}), M.den, ring_->One());
  }
  FFElement Div(const FFElement& a, const FFElement& b) const { return Mul(a, Inv(b)); }

  // Norm to k(x) as (numerator, monic denominator).
  std::pair<Poly, Poly> Norm(const FFElement& h) const {
    RatMatrix M = MulMatrix(h);
    CoordVec v{{ops_->Det(M.num)}, ring_->Pow(M.den, d_)};
    co_->Normalize(v);
    return {v.num[0], v.den};
  }

  // ---- infinite places ----------------------------------------------

  CoordVec ToInfinite(const FFElement& h) const { return co_->VecMat(h, omega_to_inf_); }
  FFElement FromInfinite(const CoordVec& v) const { return co_->VecMat(v, inf_to_omega_); }

  // Normalized valuation at the infinite place with 0-based position `i`.
  int Valuation(const FFElement& h, int i) const { return InfValuation(ToInfinite(h), i); }

  std::vector<int> InfiniteValuations(const FFElement& h) const {
    CoordVec hv = ToInfinite(h);
    std::vector<int> v(places_.size());
    for (std::size_t i = 0; i < places_.size(); ++i) v[i] = InfValuation(hv, static_cast<int>(i));
    return v;
  }

  // (-nu_1(h), ..., -nu_n(h)), the distinguished place omitted.
  std::vector<int> Psi(const FFElement& h) const {
    std::vector<int> v = InfiniteValuations(h);
    v.pop_back();
    for (auto& x : v) x = -x;
    return v;
  }

  // Valuation in infinite-basis coordinates.
  int InfValuation(const CoordVec& hv, int i) const {
    if (hv.IsZero()) throw ArithmeticError("valuation of zero element");
    const InfinitePlace& P = places_[i];
    int s0 = INT_MAX;
    for (auto& c : hv.num) s0 = std::min(s0, OrdInfinity(c, hv.den));
    // h = z^{s0} h0 with h0 a unit of O_inf modulo z.
    CoordVec h0 = hv;
    if (s0 > 0) {
      for (auto& c : h0.num) c = ring_->ShiftUp(c, s0);
    } else if (s0 < 0) {
      h0.den = ring_->ShiftUp(h0.den, -s0);
    }
    co_->Normalize(h0);
    int k = 0;
    for (;;) {
      KVec a = Residue(h0);
      if (!klin_->InSpan(a, P.prime_rref, P.prime_pivots)) break;
      h0 = co_->VecMat(h0, P.anti_mult);
      ++k;
    }
    return P.ram_index * s0 + k;
  }

  // Image of an element of O_inf (infinite-basis coordinates) in O_inf / z O_inf.
  KVec Residue(const CoordVec& hv) const {
    KVec a(d_);
    for (int j = 0; j < d_; ++j) a[j] = ValueAtInfinity(*ring_, hv.num[j], hv.den);
    return a;
  }

  bool InInfiniteOrder(const CoordVec& hv) const {
    for (auto& c : hv.num)
      if (OrdInfinity(c, hv.den) < 0) return false;
    return true;
  }

  // Sum of t_i * deg p_i.
  long long InfiniteDegree(const std::vector<int>& t) const {
    long long s = 0;
    for (std::size_t i = 0; i < places_.size(); ++i) s += static_cast<long long>(t[i]) * places_[i].degree;
    return s;
  }

  // An element w_t with nu_i(w_t) = t_i at every infinite place, in infinite-basis coordinates.
  CoordVec ShiftElement(const std::vector<int>& t) const {
    const int m = static_cast<int>(places_.size());
    if (static_cast<int>(t.size()) != m) throw std::invalid_argument("shift vector length mismatch");
    // w = x^{-s} * prod_i (uniformizer or anti-uniformizer)^{|t_i - e_i s|}, s chosen to minimize the total exponent.
    int lo = INT_MAX, hi = INT_MIN;
    for (int i = 0; i < m; ++i) {
      const int e = places_[i].ram_index;
      lo = std::min(lo, FloorDiv(t[i], e));
      hi = std::max(hi, FloorDiv(t[i], e) + 1);
    }
    int best_s = 0;
    long long best = LLONG_MAX;
    for (int s = lo; s <= hi; ++s) {
      long long cost = 0;
      for (int i = 0; i < m; ++i) cost += std::llabs(static_cast<long long>(t[i]) - 1LL * places_[i].ram_index * s);
      if (cost < best) {
        best = cost;
        best_s = s;
      }
    }
    CoordVec w = one_inf_;
    for (int i = 0; i < m; ++i) {
      const int k = t[i] - places_[i].ram_index * best_s;
      const CoordVec& base = k >= 0 ? places_[i].uniformizer : places_[i].anti_uniformizer;
      for (int r = 0; r < std::abs(k); ++r) w = inf_alg_.Mul(*ring_, *co_, w, base);
    }
    if (best_s > 0)
      w = co_->ScaleRat(w, ring_->One(), ring_->Monomial(1, best_s));
    else if (best_s < 0)
      w = co_->ScaleRat(w, ring_->Monomial(1, -best_s), ring_->One());
    return w;
  }

  // W_t: row j holds the infinite-basis coordinates of omega_j * w_t, so that
  // h lies in {nu_i >= -t_i for all i} iff (coords of h) * W_t is integral at infinity.
  RatMatrix ShiftMatrix(const std::vector<int>& t) const {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      auto it = shift_cache_.find(t);
      if (it != shift_cache_.end()) return it->second;
    }
    CoordVec w = ShiftElement(t);
    RatMatrix W = co_->MatMul(omega_to_inf_, inf_alg_.MulMatrix(*ring_, *co_, w), *ops_);
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (shift_cache_.size() >= kShiftCacheCap) shift_cache_.clear();
    shift_cache_.emplace(t, W);
    return W;
  }

  // Whether nu_i(h) >= -t_i at every infinite place.
  bool InInfiniteBox(const FFElement& h, const std::vector<int>& t) const {
    return InInfiniteOrder(co_->VecMat(h, ShiftMatrix(t)));
  }

  // Riemann-Hurwitz genus from the discriminants of both orders.
  int DiscriminantGenus() const { return genus_; }

 private:
  static constexpr std::size_t kShiftCacheCap = 1 << 14;

  static int FloorDiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

  void Setup() {
    const PolyRing& R = *ring_;
    if (input_.equation.size() < 2) throw CurveError("defining polynomial must have positive degree in y");
    if (!input_.equation.back().IsOne()) throw CurveError("defining polynomial must be monic in y");
    d_ = static_cast<int>(input_.equation.size()) - 1;
    CheckBasisShape(input_.finite, "finite");
    CheckBasisShape(input_.infinite, "infinite");

    omega_ = RatMatrix{input_.finite.num, input_.finite.den};
    co_->Normalize(omega_);
    pow_to_omega_ = InvertBasis(omega_, "finite");
    RatMatrix vinf{input_.infinite.num, input_.infinite.den};
    co_->Normalize(vinf);
    RatMatrix pow_to_inf = InvertBasis(vinf, "infinite");
    omega_to_inf_ = co_->MatMul(omega_, pow_to_inf, *ops_);
    inf_to_omega_ = co_->MatMul(vinf, pow_to_omega_, *ops_);

    one_ = FromPower(co_->Unit(d_, 0));
    if (!one_.den.IsOne()) throw CurveError("finite basis does not contain 1");
    if (d_ > 1 && !FromPower(co_->Unit(d_, 1)).den.IsOne()) throw CurveError("finite basis does not contain y");
    one_inf_ = co_->VecMat(co_->Unit(d_, 0), pow_to_inf);
    if (!InInfiniteOrder(one_inf_)) throw CurveError("infinite basis does not contain 1");

    fin_alg_ = BuildAlgebra(omega_, pow_to_omega_, true);
    inf_alg_ = BuildAlgebra(vinf, pow_to_inf, false);
    (void)R;

    SplitInfinity();
    CheckIrreducibleAndConstants();
    ComputeGenus();
    ComputeDigest();
  }

  void CheckBasisShape(const BasisRows& b, const char* what) const {
    if (b.num.rows != d_ || b.num.cols != d_)
      throw CurveError(std::string(what) + " basis must have d rows of d coordinates");
    if (b.den.IsZero()) throw CurveError(std::string(what) + " basis has zero denominator");
  }

  RatMatrix InvertBasis(const RatMatrix& B, const char* what) const {
    if (ops_->Det(B.num).IsZero()) throw CurveError(std::string(what) + " basis is linearly dependent");
    auto [Y, D] = ops_->InverseScaled(B.num);
    RatMatrix inv{ops_->Scale(Y, B.den), D};
    co_->Normalize(inv);
    return inv;
  }

  // Product of power-basis numerators reduced modulo F.
  std::vector<Poly> MulPower(const std::vector<Poly>& a, const std::vector<Poly>& b) const {
    const PolyRing& R = *ring_;
    std::vector<Poly> c(2 * d_ - 1);
    for (int i = 0; i < d_; ++i) {
      if (a[i].IsZero()) continue;
      for (int j = 0; j < d_; ++j)
        if (!b[j].IsZero()) c[i + j] = R.Add(c[i + j], R.Mul(a[i], b[j]));
    }
    for (int m = 2 * d_ - 2; m >= d_; --m) {
      if (c[m].IsZero()) continue;
      for (int l = 0; l < d_; ++l)
        if (!input_.equation[l].IsZero()) c[m - d_ + l] = R.Sub(c[m - d_ + l], R.Mul(c[m], input_.equation[l]));
      c[m] = Poly();
    }
    c.resize(d_);
    return c;
  }

  StructAlgebra BuildAlgebra(const RatMatrix& B, const RatMatrix& pow_to_b, bool finite) const {
    const PolyRing& R = *ring_;
    std::vector<CoordVec> prods(static_cast<std::size_t>(d_) * d_);
    Poly lcm = R.One();
    for (int i = 0; i < d_; ++i)
      for (int j = i; j < d_; ++j) {
        CoordVec pv{MulPower(B.num.Row(i), B.num.Row(j)), R.Mul(B.den, B.den)};
        co_->Normalize(pv);
        CoordVec c = co_->VecMat(pv, pow_to_b);
        if (finite) {
          if (!c.den.IsOne()) throw CurveError("finite basis is not closed under multiplication");
        } else if (!InInfiniteOrder(c)) {
          throw CurveError("infinite basis is not closed under multiplication");
        }
        lcm = R.Lcm(lcm, c.den);
        prods[i * d_ + j] = c;
        prods[j * d_ + i] = std::move(c);
      }
    std::vector<Poly> consts(static_cast<std::size_t>(d_) * d_ * d_);
    for (int ij = 0; ij < d_ * d_; ++ij) {
      const Poly f = R.Div(lcm, prods[ij].den);
      for (int k = 0; k < d_; ++k) consts[ij * d_ + k] = R.Mul(prods[ij].num[k], f);
    }
    return StructAlgebra(d_, std::move(consts), lcm);
  }

  // ---- residue algebra A = O_inf / z O_inf ----------------------------

  KVec AMul(const KVec& a, const KVec& b) const {
    const Fq& F = *field_;
    KVec r(d_, 0);
    for (int i = 0; i < d_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < d_; ++j) {
        if (b[j] == 0) continue;
        const Elem ab = F.Mul(a[i], b[j]);
        for (int k = 0; k < d_; ++k) {
          const Elem c = a0_[(i * d_ + j) * d_ + k];
          if (c) r[k] = F.Add(r[k], F.Mul(ab, c));
        }
      }
    }
    return r;
  }

  KVec APow(KVec a, std::uint64_t e) const {
    KVec r = unit_a_;
    while (e) {
      if (e & 1) r = AMul(r, a);
      a = AMul(a, a);
      e >>= 1;
    }
    return r;
  }

  // Monic minimal polynomial of c in A.
  Poly AMinPoly(const KVec& c) const {
    std::vector<KVec> pw{unit_a_};
    for (int k = 1; k <= d_ + 1; ++k) {
      pw.push_back(AMul(pw.back(), c));
      auto ker = klin_->LeftKernel(pw);
      if (!ker.empty()) {
        const KVec& v = ker[0];
        // Kernel vectors are in RREF; take the one involving the top power.
        for (auto& kv : ker)
          if (kv[k] != 0) return ring_->Monic(Poly(KVec(kv.begin(), kv.end())));
        return ring_->Monic(Poly(KVec(v.begin(), v.end())));
      }
    }
    throw CurveError("minimal polynomial computation failed");
  }

  void SplitInfinity() {
    const Fq& F = *field_;
    const PolyRing& R = *ring_;
    const KLinear& L = *klin_;
    a0_.assign(static_cast<std::size_t>(d_) * d_ * d_, 0);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
          a0_[(i * d_ + j) * d_ + k] = ValueAtInfinity(R, inf_alg_.Const(i, j, k), inf_alg_.den());
    unit_a_ = Residue(one_inf_);

    std::vector<KVec> basis(d_);
    for (int j = 0; j < d_; ++j) {
      basis[j].assign(d_, 0);
      basis[j][j] = 1;
    }
    std::vector<KVec> frob(d_);
    for (int j = 0; j < d_; ++j) frob[j] = APow(basis[j], F.q());
    std::vector<KVec> fm = frob;
    for (std::uint64_t qm = F.q(); qm < static_cast<std::uint64_t>(d_); qm *= F.q()) fm = L.MatMul(fm, frob);
    std::vector<int> rad_piv;
    const std::vector<KVec> rad = L.Rref(L.LeftKernel(fm), &rad_piv);
    std::vector<KVec> fix = frob;
    for (int j = 0; j < d_; ++j) fix[j][j] = F.Sub(fix[j][j], 1);
    const std::vector<KVec> fixed = L.LeftKernel(fix);

    // Refine {1} into primitive idempotents using the Frobenius-fixed basis.
    std::vector<KVec> idem{unit_a_};
    Factorizer fac(R);
    for (const KVec& b : fixed) {
      std::vector<KVec> next;
      for (const KVec& eps : idem) {
        const KVec c = AMul(b, eps);
        const std::vector<Elem> roots = fac.Roots(AMinPoly(c));
        if (roots.size() <= 1) {
          next.push_back(eps);
          continue;
        }
        for (Elem lam : roots) {
          KVec e = eps;
          for (Elem mu : roots) {
            if (mu == lam) continue;
            KVec f = L.Sub(c, L.Scale(unit_a_, mu));
            e = L.Scale(AMul(e, f), F.Inv(F.Sub(lam, mu)));
          }
          if (!KLinear::IsZero(e)) next.push_back(e);
        }
      }
      idem = std::move(next);
    }
    if (static_cast<int>(idem.size()) != static_cast<int>(fixed.size()))
      throw CurveError("infinite place splitting failed");

    std::vector<InfinitePlace> places;
    int total = 0;
    for (const KVec& eps : idem) {
      InfinitePlace P;
      P.idempotent = eps;
      std::vector<KVec> comp, radi, rest;
      const KVec co_eps = L.Sub(unit_a_, eps);
      for (const KVec& b : basis) {
        comp.push_back(AMul(b, eps));
        rest.push_back(AMul(b, co_eps));
      }
      for (const KVec& r : rad) radi.push_back(AMul(r, eps));
      comp = L.Rref(comp);
      std::vector<int> radi_piv;
      radi = L.Rref(radi, &radi_piv);
      const int dim = static_cast<int>(comp.size());
      const int rdim = static_cast<int>(radi.size());
      P.degree = dim - rdim;
      if (P.degree <= 0 || dim % P.degree != 0) throw CurveError("inconsistent infinite basis");
      P.ram_index = dim / P.degree;
      total += dim;
      std::vector<KVec> m = radi;
      for (auto& r : rest) m.push_back(r);
      P.prime_rref = L.Rref(m, &P.prime_pivots);

      // Local uniformizer lift: z when unramified, else an element of rad \ rad^2.
      CoordVec pit;
      if (P.ram_index == 1) {
        pit = co_->ScaleRat(one_inf_, R.One(), R.X());
      } else {
        std::vector<KVec> rad2;
        for (auto& a : radi)
          for (auto& b : radi) rad2.push_back(AMul(a, b));
        std::vector<int> r2piv;
        rad2 = L.Rref(rad2, &r2piv);
        const KVec* pick = nullptr;
        for (auto& a : radi)
          if (!L.InSpan(a, rad2, r2piv)) {
            pick = &a;
            break;
          }
        if (!pick) throw CurveError("no local uniformizer at an infinite place");
        pit = Lift(*pick);
      }
      const CoordVec et = Lift(eps);
      const CoordVec one_minus = co_->Sub(one_inf_, et);
      const CoordVec om2 = inf_alg_.Mul(R, *co_, one_minus, one_minus);
      const CoordVec et2 = inf_alg_.Mul(R, *co_, et, et);
      P.uniformizer = co_->Add(inf_alg_.Mul(R, *co_, pit, et), om2);
      CoordVec tau = co_->ScaleRat(et2, R.X(), R.One());
      for (int r = 1; r < P.ram_index; ++r) tau = inf_alg_.Mul(R, *co_, tau, pit);
      P.anti_uniformizer = co_->Add(tau, om2);
      P.anti_mult = inf_alg_.MulMatrix(R, *co_, P.anti_uniformizer);

      ByteWriter w;
      w.U32(P.degree);
      w.U32(P.ram_index);
      w.U32(static_cast<std::uint32_t>(P.prime_rref.size()));
      for (auto& row : P.prime_rref)
        for (Elem a : row) w.Element(F, a);
      P.bytes = w.Take();
      places.push_back(std::move(P));
    }
    if (total != d_) throw CurveError("infinite places do not account for the full degree");

    std::sort(places.begin(), places.end(), [](const InfinitePlace& a, const InfinitePlace& b) {
      if (a.degree != b.degree) return a.degree < b.degree;
      return a.bytes < b.bytes;
    });
    // The first degree-1 place, else the minimal place, becomes p_{n+1}.
    std::size_t dist = 0;
    for (std::size_t i = 0; i < places.size(); ++i)
      if (places[i].degree == 1) {
        dist = i;
        break;
      }
    if (input_.distinguished != 0) {
      if (input_.distinguished < 0 || input_.distinguished > static_cast<int>(places.size()))
        throw CurveError("distinguished place index out of range");
      dist = static_cast<std::size_t>(input_.distinguished - 1);
    }
    InfinitePlace last = std::move(places[dist]);
    places.erase(places.begin() + static_cast<long>(dist));
    places.push_back(std::move(last));
    for (std::size_t i = 0; i < places.size(); ++i) places[i].index = static_cast<int>(i) + 1;
    places_ = std::move(places);
  }

  CoordVec Lift(const KVec& a) const {
    CoordVec v;
    v.num.resize(d_);
    for (int j = 0; j < d_; ++j) v.num[j] = ring_->Const(a[j]);
    return v;
  }

  // Certifies that F is irreducible and k is the full constant field by
  // combining factorizations of F(c, y) with the local degrees at infinity.
  void CheckIrreducibleAndConstants() {
    const Fq& F = *field_;
    const PolyRing& R = *ring_;
    auto subset_sums = [&](const std::vector<int>& parts) {
      std::vector<char> s(d_ + 1, 0);
      s[0] = 1;
      for (int p : parts)
        for (int v = d_; v >= p; --v)
          if (s[v - p]) s[v] = 1;
      return s;
    };
    std::vector<int> local;
    int g = 0;
    for (auto& P : places_) {
      local.push_back(P.degree * P.ram_index);
      g = std::gcd(g, P.degree);
    }
    std::vector<char> possible = subset_sums(local);
    auto certified = [&] {
      for (int v = 1; v < d_; ++v)
        if (possible[v]) return false;
      return true;
    };
    const std::uint64_t limit = std::min<std::uint64_t>(F.q(), 4096);
    // Eisenstein-Dumas at x = c: a single Newton polygon segment of slope v_0/d
    // with gcd(v_0, d) = 1 means a totally ramified degree-one place.
    for (std::uint64_t c = 0; c < limit && !certified(); ++c) {
      const Poly lin = R.Linear(static_cast<Elem>(c));
      auto val = [&](Poly a) {
        int v = 0;
        for (;;) {
          auto [q, r] = R.DivMod(a, lin);
          if (!r.IsZero()) return v;
          a = std::move(q);
          ++v;
        }
      };
      if (input_.equation[0].IsZero()) break;
      const int v0 = val(input_.equation[0]);
      if (std::gcd(v0, d_) != 1) continue;
      bool dumas = true;
      for (int j = 1; j < d_ && dumas; ++j)
        if (!input_.equation[j].IsZero()) dumas = static_cast<long long>(d_) * val(input_.equation[j]) >= 1LL * (d_ - j) * v0;
      if (dumas) {
        std::fill(possible.begin() + 1, possible.end() - 1, 0);
        g = 1;
      }
    }
    Factorizer fac(R, 0xf1e1d);
    for (std::uint64_t c = 0; c < limit && (!certified() || g != 1); ++c) {
      std::vector<Elem> coeffs(d_ + 1);
      for (int j = 0; j <= d_; ++j) coeffs[j] = R.Eval(input_.equation[j], static_cast<Elem>(c));
      const Poly fc(coeffs);
      const Factorization fz = fac.Factor(fc);
      std::vector<int> parts;
      bool squarefree = true;
      for (auto& t : fz.terms) {
        for (int r = 0; r < t.multiplicity; ++r) parts.push_back(t.factor.Deg());
        if (t.multiplicity > 1) squarefree = false;
      }
      std::vector<char> s = subset_sums(parts);
      for (int v = 0; v <= d_; ++v) possible[v] = possible[v] && s[v];
      if (squarefree)
        for (auto& t : fz.terms) g = std::gcd(g, t.factor.Deg());
    }
    if (!certified()) throw CurveError("defining polynomial is reducible or irreducibility could not be certified");
    if (g != 1) throw CurveError("constant field of K is larger than k");
  }

  void ComputeGenus() {
    const PolyRing& R = *ring_;
    // Finite part: discriminant of the trace form on O_K.
    std::vector<Poly> tr(d_);
    for (int l = 0; l < d_; ++l)
      for (int j = 0; j < d_; ++j) tr[l] = R.Add(tr[l], fin_alg_.Const(l, j, j));
    PolyMatrix G(d_, d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int l = 0; l < d_; ++l) G.at(i, j) = R.Add(G.at(i, j), R.Mul(fin_alg_.Const(i, j, l), tr[l]));
    disc_fin_ = ops_->Det(G);
    if (disc_fin_.IsZero()) throw CurveError("inseparable extension");
    // Infinite part: ord_z of the discriminant of O_inf.
    std::vector<Poly> ti(d_);
    for (int l = 0; l < d_; ++l)
      for (int j = 0; j < d_; ++j) ti[l] = R.Add(ti[l], inf_alg_.Const(l, j, j));
    PolyMatrix H(d_, d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int l = 0; l < d_; ++l) H.at(i, j) = R.Add(H.at(i, j), R.Mul(inf_alg_.Const(i, j, l), ti[l]));
    const Poly dh = ops_->Det(H);
    if (dh.IsZero()) throw CurveError("inseparable extension");
    const int ord_inf = 2 * d_ * inf_alg_.den().Deg() - dh.Deg();
    const int twice = -2 * d_ + disc_fin_.Deg() + ord_inf;
    if (twice < -2 || twice % 2 != 0) throw CurveError("bases are not maximal orders");
    genus_ = twice / 2 + 1;
  }

  void ComputeDigest() {
    const Fq& F = *field_;
    ByteWriter w;
    w.U32(F.p());
    w.U32(F.e());
    for (auto c : input_.base.modulus) w.U32(c);
    for (auto& c : input_.equation) w.Polynomial(F, c);
    for (const RatMatrix* M : {&omega_, &omega_to_inf_}) {
      for (auto& e : M->num.a) w.Polynomial(F, e);
      w.Polynomial(F, M->den);
    }
    if (input_.distinguished != 0) w.I32(input_.distinguished);
    digest_ = Fnv1a64(w.str());
  }

  FieldInput input_;
  std::unique_ptr<Fq> field_;
  std::unique_ptr<PolyRing> ring_;
  std::unique_ptr<PolyMatrixOps> ops_;
  std::unique_ptr<CoordOps> co_;
  std::unique_ptr<KLinear> klin_;
  int d_ = 0;
  int genus_ = 0;
  RatMatrix omega_, pow_to_omega_, omega_to_inf_, inf_to_omega_;
  StructAlgebra fin_alg_, inf_alg_;
  FFElement one_;
  CoordVec one_inf_;
  std::vector<Elem> a0_;
  KVec unit_a_;
  std::vector<InfinitePlace> places_;
  Poly disc_fin_;
  std::uint64_t digest_ = 0;
  mutable std::mutex cache_mu_;
  mutable std::map<std::vector<int>, RatMatrix> shift_cache_;
};

// y^m = g(x) with p not dividing m. The finite basis is
// y^j / prod_k s_k^floor(j*k/m) for the squarefree decomposition g = c * prod s_k^k,
// the infinite basis is y^j / x^ceil(j*deg g/m). Hyperelliptic curves are m = 2.
inline FieldInput KummerInput(const FieldSpec& base, int m, const Poly& g, std::string name = "") {
  Fq F(base);
  PolyRing R(F);
  if (m < 2) throw CurveError("Kummer exponent must be at least 2");
  if (m % static_cast<int>(base.p) == 0) throw CurveError("Kummer exponent divisible by the characteristic");
  if (g.Deg() < 1) throw CurveError("Kummer right-hand side must be nonconstant");
  Factorizer fac(R);
  const auto sqf = fac.Squarefree(g);
  FieldInput in;
  in.name = std::move(name);
  in.base = base;
  in.equation.assign(m + 1, Poly());
  in.equation[0] = R.Neg(g);
  in.equation[m] = R.One();
  std::vector<Poly> dens(m, R.One());
  for (int j = 0; j < m; ++j)
    for (auto& [s, k] : sqf) dens[j] = R.Mul(dens[j], R.Pow(s, static_cast<std::uint64_t>(j) * k / m));
  in.finite.num = PolyMatrix(m, m);
  in.finite.den = dens[m - 1];
  for (int j = 0; j < m; ++j) in.finite.num.at(j, j) = R.Div(dens[m - 1], dens[j]);
  const int D = g.Deg();
  const int top = ((m - 1) * D + m - 1) / m;
  in.infinite.num = PolyMatrix(m, m);
  in.infinite.den = R.Monomial(1, top);
  for (int j = 0; j < m; ++j) in.infinite.num.at(j, j) = R.Monomial(1, top - (j * D + m - 1) / m);
  return in;
}

}  // namespace ffinfra
