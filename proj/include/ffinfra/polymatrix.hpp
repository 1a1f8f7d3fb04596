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
#include <stdexcept>
#include <utility>
#include <vector>

#include "ffinfra/poly.hpp"

namespace ffinfra {

class LatticeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Dense row-major matrix of polynomials.
struct PolyMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Poly> a;

  PolyMatrix() = default;
  PolyMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Poly& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Poly& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static PolyMatrix Identity(int n) {
    PolyMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Poly({1});
    return m;
  }

  std::vector<Poly> Row(int i) const {
    return std::vector<Poly>(a.begin() + static_cast<std::ptrdiff_t>(i) * cols,
                             a.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols);
  }
  void SetRow(int i, const std::vector<Poly>& r) {
    for (int j = 0; j < cols; ++j) at(i, j) = r[j];
  }
  void SwapRows(int i, int k) {
    if (i == k) return;
    for (int j = 0; j < cols; ++j) std::swap(at(i, j), at(k, j));
  }
  PolyMatrix Transpose() const {
    PolyMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }
  bool operator==(const PolyMatrix&) const = default;

  int MaxDeg() const {
    int d = -1;
    for (auto& p : a) d = std::max(d, p.Deg());
    return d;
  }
};

struct HnfResult {
  PolyMatrix H;
  PolyMatrix U;
};

struct ReduceResult {
  PolyMatrix M;  // reduced matrix
  PolyMatrix T;  // unimodular transformation
};

// Matrix algorithms over k[x].
class PolyMatrixOps {
 public:
  explicit PolyMatrixOps(const PolyRing& ring) : R_(ring) {}

  const PolyRing& ring() const { return R_; }

  PolyMatrix Mul(const PolyMatrix& A, const PolyMatrix& B) const {
    if (A.cols != B.rows) throw LatticeError("dimension mismatch in matrix product");
    PolyMatrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int k = 0; k < A.cols; ++k) {
        const Poly& aik = A.at(i, k);
        if (aik.IsZero()) continue;
        for (int j = 0; j < B.cols; ++j) {
          const Poly& bkj = B.at(k, j);
          if (bkj.IsZero()) continue;
          C.at(i, j) = R_.Add(C.at(i, j), R_.Mul(aik, bkj));
        }
      }
    return C;
  }

  PolyMatrix Scale(const PolyMatrix& A, const Poly& s) const {
    PolyMatrix C = A;
    for (auto& p : C.a) p = R_.Mul(p, s);
    return C;
  }

  // Fraction-free (Bareiss) determinant.
  Poly Det(const PolyMatrix& M) const {
    if (M.rows != M.cols) throw LatticeError("determinant of a non-square matrix");
    const int n = M.rows;
    if (n == 0) return R_.One();
    PolyMatrix A = M;
    Poly prev = R_.One();
    bool negate = false;
    for (int k = 0; k < n - 1; ++k) {
      if (A.at(k, k).IsZero()) {
        int s = -1;
        for (int i = k + 1; i < n; ++i)
          if (!A.at(i, k).IsZero()) {
            s = i;
            break;
          }
        if (s < 0) return R_.Zero();
        A.SwapRows(k, s);
        negate = !negate;
      }
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) {
          Poly v = R_.Sub(R_.Mul(A.at(i, j), A.at(k, k)), R_.Mul(A.at(i, k), A.at(k, j)));
          A.at(i, j) = R_.DivExact(v, prev);
        }
      prev = A.at(k, k);
      for (int i = k + 1; i < n; ++i) A.at(i, k) = Poly();
    }
    Poly d = A.at(n - 1, n - 1);
    return negate ? R_.Neg(d) : d;
  }

  // Row Hermite normal form H = U*M of a full-row-rank matrix: echelon with
  // monic pivots, entries above each pivot reduced modulo it.
  HnfResult Hnf(const PolyMatrix& M) const {
    PolyMatrix H = M;
    PolyMatrix U = PolyMatrix::Identity(M.rows);
    int r = EchelonWithCompanion(H, &U, nullptr);
    if (r < M.rows) throw LatticeError("hnf: input is rank deficient");
    return {std::move(H), std::move(U)};
  }

  // Basis in Hermite form of the row module of a matrix whose rank equals
  // its column count; zero rows are removed.
  PolyMatrix HnfBasis(const PolyMatrix& M) const {
    PolyMatrix H = M;
    int r = EchelonWithCompanion(H, nullptr, nullptr);
    if (r < M.cols) throw LatticeError("hnf: row module is not of full rank");
    return Truncate(H, r);
  }

  // As HnfBasis, for a row module known to contain D * k[x]^cols; entries
  // are kept reduced modulo D throughout.
  PolyMatrix HnfModular(const PolyMatrix& M, const Poly& D) const {
    const int n = M.cols;
    PolyMatrix H(M.rows + n, n);
    const Poly Dm = R_.Monic(D);
    for (int i = 0; i < M.rows; ++i)
      for (int j = 0; j < n; ++j) H.at(i, j) = R_.Mod(M.at(i, j), Dm);
    for (int j = 0; j < n; ++j) H.at(M.rows + j, j) = Dm;
    int r = EchelonWithCompanion(H, nullptr, &Dm);
    if (r < n) throw LatticeError("hnf: modular input is not of full rank");
    return Truncate(H, r);
  }

  // Row-wise shifted reduction to weak Popov form: the shifted degree of a
  // row is max_j deg(M_ij) + s_j and its pivot is the lowest column index
  // attaining it. Row operations are mirrored on `companion` if given.
  // Returns the shifted row degrees (INT_MIN for zero rows).
  std::vector<int> RowReduce(PolyMatrix& M, const std::vector<int>& s, PolyMatrix* companion) const {
    const int n = M.rows;
    std::vector<int> deg(n), piv(n);
    auto update = [&](int i) {
      int best = INT_MIN, bj = -1;
      for (int j = 0; j < M.cols; ++j) {
        const Poly& e = M.at(i, j);
        if (e.IsZero()) continue;
        const int v = e.Deg() + s[j];
        if (v > best) {
          best = v;
          bj = j;
        }
      }
      deg[i] = best;
      piv[i] = bj;
    };
    for (int i = 0; i < n; ++i) update(i);
    const Fq& F = R_.field();
    for (;;) {
      int a = -1, b = -1;
      for (int i = 0; i < n && a < 0; ++i) {
        if (piv[i] < 0) continue;
        for (int k = i + 1; k < n; ++k)
          if (piv[k] == piv[i]) {
            a = i;
            b = k;
            break;
          }
      }
      if (a < 0) break;
      if (deg[a] < deg[b]) std::swap(a, b);
      // Cancel the pivot of row a using row b.
      const int j = piv[a];
      const int shift = deg[a] - deg[b];
      const Elem c = F.Div(M.at(a, j).Lc(), M.at(b, j).Lc());
      for (int col = 0; col < M.cols; ++col)
        M.at(a, col) = R_.SubMulShift(M.at(a, col), c, shift, M.at(b, col));
      if (companion) {
        for (int col = 0; col < companion->cols; ++col)
          companion->at(a, col) = R_.SubMulShift(companion->at(a, col), c, shift, companion->at(b, col));
      }
      update(a);
    }
    return deg;
  }

  // Column-wise shifted reduction: M' = M*T with the columns of M' in weak
  // Popov form for shifted degrees deg(M_ij) + s_i.
  ReduceResult ShiftedReduce(const PolyMatrix& M, const std::vector<int>& s) const {
    if (M.rows != M.cols) throw LatticeError("shifted_reduce: matrix must be square");
    if (static_cast<int>(s.size()) != M.rows) throw LatticeError("shifted_reduce: shift length mismatch");
    if (Det(M).IsZero()) throw LatticeError("shifted_reduce: singular matrix");
    PolyMatrix Mt = M.Transpose();
    PolyMatrix Ut = PolyMatrix::Identity(M.cols);
    RowReduce(Mt, s, &Ut);
    return {Mt.Transpose(), Ut.Transpose()};
  }

  // Shifted degree of each column: max_i deg(M_ij) + s_i.
  std::vector<int> ColumnDegrees(const PolyMatrix& M, const std::vector<int>& s) const {
    std::vector<int> d(M.cols, INT_MIN);
    for (int j = 0; j < M.cols; ++j)
      for (int i = 0; i < M.rows; ++i)
        if (!M.at(i, j).IsZero()) d[j] = std::max(d[j], M.at(i, j).Deg() + s[i]);
    return d;
  }

  // For nonsingular square M returns (Y, D) with M^{-1} = Y / D, D monic.
  std::pair<PolyMatrix, Poly> InverseScaled(const PolyMatrix& M) const {
    HnfResult h = Hnf(M);
    const int n = M.rows;
    Poly D = R_.One();
    for (int i = 0; i < n; ++i) D = R_.Mul(D, h.H.at(i, i));
    // Solve H * Y = D * U by back substitution; all divisions are exact.
    PolyMatrix Y(n, n);
    for (int i = n - 1; i >= 0; --i) {
      for (int j = 0; j < n; ++j) {
        Poly acc = R_.Mul(D, h.U.at(i, j));
        for (int k = i + 1; k < n; ++k)
          if (!h.H.at(i, k).IsZero()) acc = R_.Sub(acc, R_.Mul(h.H.at(i, k), Y.at(k, j)));
        Y.at(i, j) = R_.DivExact(acc, h.H.at(i, i));
      }
    }
    return {std::move(Y), std::move(D)};
  }

 private:
  static PolyMatrix Truncate(const PolyMatrix& H, int r) {
    PolyMatrix out(r, H.cols);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < H.cols; ++j) out.at(i, j) = H.at(i, j);
    return out;
  }

  void RowSubMul(PolyMatrix& A, int i, const Poly& q, int k, int from_col, const Poly* mod) const {
    for (int col = from_col; col < A.cols; ++col) {
      if (A.at(k, col).IsZero()) continue;
      Poly v = R_.Sub(A.at(i, col), R_.Mul(q, A.at(k, col)));
      A.at(i, col) = mod ? R_.Mod(v, *mod) : std::move(v);
    }
  }

  // In-place echelon form; returns the rank. Rows are permuted so that the
  // first `rank` rows carry the pivots.
  int EchelonWithCompanion(PolyMatrix& H, PolyMatrix* U, const Poly* mod) const {
    const Fq& F = R_.field();
    int r = 0;
    std::vector<int> pivcol;
    for (int j = 0; j < H.cols && r < H.rows; ++j) {
      for (;;) {
        int best = -1;
        for (int i = r; i < H.rows; ++i) {
          const Poly& e = H.at(i, j);
          if (e.IsZero()) continue;
          if (best < 0 || e.Deg() < H.at(best, j).Deg()) best = i;
        }
        if (best < 0) break;
        H.SwapRows(r, best);
        if (U) U->SwapRows(r, best);
        bool done = true;
        for (int i = r + 1; i < H.rows; ++i) {
          if (H.at(i, j).IsZero()) continue;
          Poly q = R_.Div(H.at(i, j), H.at(r, j));
          RowSubMul(H, i, q, r, j, mod);
          if (U) RowSubMul(*U, i, q, r, 0, nullptr);
          if (!H.at(i, j).IsZero()) done = false;
        }
        if (done) break;
      }
      if (H.at(r, j).IsZero()) continue;
      const Elem inv = F.Inv(H.at(r, j).Lc());
      if (inv != 1) {
        for (int col = j; col < H.cols; ++col) H.at(r, col) = R_.Scale(H.at(r, col), inv);
        if (U)
          for (int col = 0; col < U->cols; ++col) U->at(r, col) = R_.Scale(U->at(r, col), inv);
      }
      pivcol.push_back(j);
      ++r;
    }
    // Reduce entries above each pivot.
    for (int k = 0; k < r; ++k) {
      const int j = pivcol[k];
      for (int i = 0; i < k; ++i) {
        if (H.at(i, j).Deg() < H.at(k, j).Deg()) continue;
        Poly q = R_.Div(H.at(i, j), H.at(k, j));
        RowSubMul(H, i, q, k, j, nullptr);
        if (U) RowSubMul(*U, i, q, k, 0, nullptr);
      }
    }
    return r;
  }

  const PolyRing& R_;
};

}  // namespace ffinfra
