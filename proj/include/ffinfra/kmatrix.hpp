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

#include <utility>
#include <vector>

#include "ffinfra/fq.hpp"

namespace ffinfra {

using KVec = std::vector<Elem>;

// Dense linear algebra over F_q on row vectors.
class KLinear {
 public:
  explicit KLinear(const Fq& field) : F_(field) {}

  // Reduced row echelon form of the given rows; zero rows are dropped.
  // `pivots` receives the pivot column of each returned row.
  std::vector<KVec> Rref(std::vector<KVec> rows, std::vector<int>* pivots = nullptr) const {
    std::vector<int> piv;
    if (rows.empty()) {
      if (pivots) pivots->clear();
      return rows;
    }
    const int cols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int j = 0; j < cols && r < static_cast<int>(rows.size()); ++j) {
      int sel = -1;
      for (int i = r; i < static_cast<int>(rows.size()); ++i)
        if (rows[i][j] != 0) {
          sel = i;
          break;
        }
      if (sel < 0) continue;
      std::swap(rows[r], rows[sel]);
      const Elem inv = F_.Inv(rows[r][j]);
      for (auto& v : rows[r]) v = F_.Mul(v, inv);
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        if (i == r || rows[i][j] == 0) continue;
        const Elem c = F_.Neg(rows[i][j]);
        for (int k = j; k < cols; ++k) rows[i][k] = F_.Add(rows[i][k], F_.Mul(c, rows[r][k]));
      }
      piv.push_back(j);
      ++r;
    }
    rows.resize(r);
    if (pivots) *pivots = piv;
    return rows;
  }

  int Rank(const std::vector<KVec>& rows) const { return static_cast<int>(Rref(rows).size()); }

  // Reduces v against an RREF basis; returns the remainder.
  KVec ReduceBy(KVec v, const std::vector<KVec>& rref, const std::vector<int>& pivots) const {
    for (std::size_t i = 0; i < rref.size(); ++i) {
      const Elem c = v[pivots[i]];
      if (c == 0) continue;
      const Elem nc = F_.Neg(c);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = F_.Add(v[k], F_.Mul(nc, rref[i][k]));
    }
    return v;
  }

  bool InSpan(const KVec& v, const std::vector<KVec>& rref, const std::vector<int>& pivots) const {
    for (Elem x : ReduceBy(v, rref, pivots))
      if (x != 0) return false;
    return true;
  }

  // Basis of {v : v * M = 0} for an m x n matrix M given by its rows.
  std::vector<KVec> LeftKernel(const std::vector<KVec>& M) const {
    const int m = static_cast<int>(M.size());
    if (m == 0) return {};
    const int n = static_cast<int>(M[0].size());
    // Row-reduce [M | I]; rows whose M-part vanishes give the kernel.
    std::vector<KVec> aug(m, KVec(n + m, 0));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) aug[i][j] = M[i][j];
      aug[i][n + i] = 1;
    }
    int r = 0;
    for (int j = 0; j < n && r < m; ++j) {
      int sel = -1;
      for (int i = r; i < m; ++i)
        if (aug[i][j] != 0) {
          sel = i;
          break;
        }
      if (sel < 0) continue;
      std::swap(aug[r], aug[sel]);
      const Elem inv = F_.Inv(aug[r][j]);
      for (auto& v : aug[r]) v = F_.Mul(v, inv);
      for (int i = 0; i < m; ++i) {
        if (i == r || aug[i][j] == 0) continue;
        const Elem c = F_.Neg(aug[i][j]);
        for (int k = 0; k < n + m; ++k) aug[i][k] = F_.Add(aug[i][k], F_.Mul(c, aug[r][k]));
      }
      ++r;
    }
    std::vector<KVec> ker;
    for (int i = r; i < m; ++i) ker.emplace_back(aug[i].begin() + n, aug[i].end());
    return Rref(ker);
  }

  // Product of a row vector with a matrix given by rows.
  KVec VecMul(const KVec& v, const std::vector<KVec>& M) const {
    const std::size_t n = M.empty() ? 0 : M[0].size();
    KVec r(n, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) r[j] = F_.Add(r[j], F_.Mul(v[i], M[i][j]));
    }
    return r;
  }

  std::vector<KVec> MatMul(const std::vector<KVec>& A, const std::vector<KVec>& B) const {
    std::vector<KVec> C;
    C.reserve(A.size());
    for (auto& row : A) C.push_back(VecMul(row, B));
    return C;
  }

  KVec Add(const KVec& a, const KVec& b) const {
    KVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.Add(a[i], b[i]);
    return r;
  }
  KVec Sub(const KVec& a, const KVec& b) const {
    KVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.Sub(a[i], b[i]);
    return r;
  }
  KVec Scale(const KVec& a, Elem s) const {
    KVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.Mul(a[i], s);
    return r;
  }
  static bool IsZero(const KVec& a) {
    for (Elem x : a)
      if (x != 0) return false;
    return true;
  }

 private:
  const Fq& F_;
};

}  // namespace ffinfra
