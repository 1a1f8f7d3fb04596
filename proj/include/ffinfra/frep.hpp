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
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ffinfra/boxes.hpp"

namespace ffinfra {

using DistanceVec = std::vector<long long>;

// An f-representation ([ideal]_~, t). `dist` is its Phi-value relative to the
// declared base ideal: the vector v with reduce(base, v) equal to this FRep.
struct FRep {
  FracIdeal ideal;
  std::vector<int> t;
  std::optional<DistanceVec> dist;
};

struct Reduction {
  FRep A;
  std::vector<int> delta;  // A.t minus the input t, which is -Psi(mu)
};

class Infrastructure {
 public:
  explicit Infrastructure(const Boxes& boxes)
      : B_(boxes), I_(boxes.ideals()), K_(I_.field()), n_(K_.unit_rank()) {}

  const Boxes& boxes() const { return B_; }
  const IdealOps& ideals() const { return I_; }
  const FunctionField& field() const { return K_; }
  int rank() const { return n_; }

  Reduction Reduce(const FracIdeal& a, const std::vector<int>& t) const {
    if (static_cast<int>(t.size()) != n_) throw std::invalid_argument("reduce: t must have length n");
    auto [ell, box] = B_.MinEll(a, t);
    (void)ell;
    BoxBasis S = B_.MinimalStratum(box);
    Reduction out;
    out.delta.resize(n_);
    out.A.t.resize(n_);
    for (int i = 0; i < n_; ++i) {
      out.delta[i] = -S.t[i];
      out.A.t[i] = t[i] + out.delta[i];
    }
    out.A.ideal = ClassRepresentative(a, S.elements);
    return out;
  }

  // reduce(base, v) carrying v as its distance.
  FRep FromDistance(const FracIdeal& base, const DistanceVec& v) const {
    std::vector<int> t(v.begin(), v.end());
    FRep A = Reduce(base, t).A;
    A.dist = v;
    return A;
  }

  FRep Identity() const {
    FRep A{I_.Unit(), std::vector<int>(n_, 0), DistanceVec(n_, 0)};
    return A;
  }

  FRep Add(const FRep& A, const FRep& B) const {
    std::vector<int> t(n_);
    for (int i = 0; i < n_; ++i) t[i] = A.t[i] + B.t[i];
    FRep C = Reduce(I_.Mul(A.ideal, B.ideal), t).A;
    if (A.dist && B.dist) C.dist = Combine(*A.dist, *B.dist, 1);
    return C;
  }

  FRep Neg(const FRep& A) const {
    std::vector<int> t(n_);
    for (int i = 0; i < n_; ++i) t[i] = -A.t[i];
    FRep C = Reduce(I_.Inv(A.ideal), t).A;
    if (A.dist) C.dist = Combine(DistanceVec(n_, 0), *A.dist, -1);
    return C;
  }

  // Group law on fRep(a). Membership of the inputs in the class of a is
  // checked against `class_labels` (labels of the enumerated fRep(a)) when
  // supplied, since deciding it in general is a principal-ideal test.
  FRep Oplus(const FRep& A, const FRep& B, const FracIdeal& a,
             const std::unordered_set<std::string>* class_labels = nullptr) const {
    if (class_labels) {
      if (!class_labels->count(Label(A)) || !class_labels->count(Label(B)))
        throw std::invalid_argument("oplus: argument is not in the class of the base ideal");
    }
    std::vector<int> t(n_);
    for (int i = 0; i < n_; ++i) t[i] = A.t[i] + B.t[i];
    FRep C = Reduce(I_.Div(I_.Mul(A.ideal, B.ideal), a), t).A;
    if (A.dist && B.dist) C.dist = Combine(*A.dist, *B.dist, 1);
    return C;
  }

  // Reduced-class component of add for inputs with t = 0.
  FracIdeal GiantStep(const FracIdeal& x, const FracIdeal& y) const {
    return Reduce(I_.Mul(x, y), std::vector<int>(n_, 0)).A.ideal;
  }

  // Divisor-class label: canonical ideal bytes followed by t.
  std::string Label(const FRep& A) const {
    ByteWriter w;
    w.Raw(I_.CanonicalBytes(A.ideal));
    for (int x : A.t) w.I32(x);
    return w.Take();
  }

  bool Same(const FRep& A, const FRep& B) const { return A.t == B.t && A.ideal == B.ideal; }

  // deg divisor(ideal) + sum t_i deg p_i.
  long long Degree(const FRep& A) const {
    long long s = I_.DegDivisor(A.ideal);
    for (int i = 0; i < n_; ++i) s += static_cast<long long>(A.t[i]) * K_.places()[i].degree;
    return s;
  }

  long long DegreeBound() const { return K_.genus() + K_.distinguished().degree - 1; }

  // 1 is a smallest nonzero element of B(ideal, (t, 0)) and t >= 0.
  bool IsValid(const FRep& A) const {
    if (static_cast<int>(A.t.size()) != n_) return false;
    for (int x : A.t)
      if (x < 0) return false;
    if (!I_.Contains(A.ideal, K_.One())) return false;
    auto [ell, box] = B_.MinEll(A.ideal, A.t);
    if (ell != 0) return false;
    BoxBasis S = B_.MinimalStratum(box);
    for (int x : S.t)
      if (x != 0) return false;
    return true;
  }

  // Invariants every constructed FRep satisfies, including the degree bound
  // and that the stored ideal is the chosen class representative.
  bool CheckInvariants(const FRep& A) const {
    if (!IsValid(A)) return false;
    const long long deg = Degree(A);
    if (deg < 0 || deg > DegreeBound()) return false;
    Reduction r = Reduce(A.ideal, A.t);
    for (int x : r.delta)
      if (x != 0) return false;
    return Same(r.A, A);
  }

  // b ~ b' for reduced ideals.
  bool IsEquiv(const FracIdeal& b, const FracIdeal& c) const {
    if (K_.distinguished().degree == 1) return b == c;
    if (I_.DegDivisor(b) != I_.DegDivisor(c)) return false;
    const std::vector<int> zero(n_ + 1, 0);
    return !B_.RrSpace(I_.Div(b, c), zero).empty();
  }

  // One-line text form: digest, ideal bytes in hex, t and optional distance.
  std::string Serialize(const FRep& A) const {
    std::ostringstream os;
    os << "frep1 " << ToHex(DigestBytes()) << ' ' << ToHex(I_.CanonicalBytes(A.ideal)) << " t=" << Join(A.t);
    if (A.dist) os << " dist=" << Join(*A.dist);
    return os.str();
  }

  FRep Parse(const std::string& text) const {
    std::istringstream is(text);
    std::string tag, digest, ideal, tpart, dpart;
    is >> tag >> digest >> ideal >> tpart;
    if (tag != "frep1" || tpart.rfind("t=", 0) != 0) throw std::invalid_argument("malformed f-representation");
    if (FromHex(digest) != DigestBytes()) throw std::invalid_argument("f-representation belongs to a different field");
    FRep A;
    A.ideal = I_.FromCanonicalBytes(FromHex(ideal));
    for (long long x : SplitInts(tpart.substr(2))) A.t.push_back(static_cast<int>(x));
    if (static_cast<int>(A.t.size()) != n_) throw std::invalid_argument("t has the wrong length");
    if (is >> dpart) {
      if (dpart.rfind("dist=", 0) != 0) throw std::invalid_argument("malformed distance");
      A.dist = SplitInts(dpart.substr(5));
      if (static_cast<int>(A.dist->size()) != n_) throw std::invalid_argument("dist has the wrong length");
    }
    return A;
  }

 private:
  // The reduced ideal (1/mu) a for mu spanning the minimal stratum. Without a
  // degree-one distinguished place the stratum may be larger than a line and
  // the ideal with the least canonical bytes is chosen.
  FracIdeal ClassRepresentative(const FracIdeal& a, const std::vector<FFElement>& stratum) const {
    if (stratum.size() == 1) return I_.DivElement(a, stratum.front());
    const Fq& F = K_.k();
    const int s = static_cast<int>(stratum.size());
    std::optional<FracIdeal> best;
    std::string best_bytes;
    // Projective points: leading coefficient 1 at position `lead`.
    for (int lead = 0; lead < s; ++lead) {
      const int free = s - lead - 1;
      KVec c(s, 0);
      c[lead] = 1;
      std::uint64_t total = 1;
      for (int i = 0; i < free; ++i) total *= F.q();
      for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t v = code;
        for (int i = lead + 1; i < s; ++i) {
          c[i] = static_cast<Elem>(v % F.q());
          v /= F.q();
        }
        FracIdeal cand = I_.DivElement(a, B_.Combine(stratum, c));
        std::string bytes = I_.CanonicalBytes(cand);
        if (!best || bytes < best_bytes) {
          best = std::move(cand);
          best_bytes = std::move(bytes);
        }
      }
    }
    return *best;
  }

  std::string DigestBytes() const {
    ByteWriter w;
    w.U64(K_.digest());
    return w.Take();
  }

  static DistanceVec Combine(const DistanceVec& a, const DistanceVec& b, long long sign) {
    DistanceVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + sign * b[i];
    return r;
  }

  template <class V>
  static std::string Join(const V& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  }

  static DistanceVec SplitInts(const std::string& s) {
    DistanceVec out;
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t next = s.find(',', pos);
      if (next == std::string::npos) next = s.size();
      std::size_t used = 0;
      const std::string tok = s.substr(pos, next - pos);
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("malformed integer list");
      pos = next + 1;
    }
    return out;
  }

  const Boxes& B_;
  const IdealOps& I_;
  const FunctionField& K_;
  const int n_;
};

}  // namespace ffinfra
