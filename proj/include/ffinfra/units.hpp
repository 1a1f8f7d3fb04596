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
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffinfra/frep.hpp"

namespace ffinfra {

using IntMatrix = std::vector<std::vector<long long>>;

class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MemoryCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hermite normal form of the integer row lattice spanned by `rows` in Z^n:
// upper triangular, positive diagonal, 0 <= H[k][i] < H[i][i] for k < i.
// Throws if the rows do not span a full-rank lattice.
inline IntMatrix HermiteForm(const IntMatrix& rows, int n) {
  using I128 = __int128;
  std::vector<std::vector<I128>> H(n, std::vector<I128>(n, 0));
  std::vector<bool> used(n, false);
  auto floordiv = [](I128 a, I128 b) {
    I128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  auto reduce_tail = [&](std::vector<I128>& v, int from) {
    for (int j = from; j < n; ++j)
      if (used[j] && v[j] != 0) {
        const I128 q = floordiv(v[j], H[j][j]);
        if (q != 0)
          for (int k = j; k < n; ++k) v[k] -= q * H[j][k];
      }
  };
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("relation has the wrong length");
    std::vector<I128> v(r.begin(), r.end());
    for (int i = 0; i < n; ++i) {
      if (v[i] == 0) continue;
      if (!used[i]) {
        if (v[i] < 0)
          for (auto& x : v) x = -x;
        H[i] = v;
        used[i] = true;
        reduce_tail(H[i], i + 1);
        break;
      }
      // Extended gcd on (H[i][i], v[i]).
      I128 a = H[i][i], b = v[i];
      I128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
      while (b != 0) {
        const I128 q = floordiv(a, b);
        I128 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
      }
      if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
      }
      const I128 hi = H[i][i] / a, vi = v[i] / a;
      std::vector<I128> nh(n), nv(n);
      for (int k = i; k < n; ++k) {
        nh[k] = x0 * H[i][k] + y0 * v[k];
        nv[k] = hi * v[k] - vi * H[i][k];
      }
      H[i] = nh;
      v = nv;
      reduce_tail(H[i], i + 1);
      reduce_tail(v, i + 1);
    }
  }
  for (int i = 0; i < n; ++i)
    if (!used[i]) throw std::invalid_argument("relations do not span a full-rank lattice");
  for (int k = n - 1; k >= 0; --k)
    for (int i = k + 1; i < n; ++i) {
      const I128 q = floordiv(H[k][i], H[i][i]);
      if (q != 0)
        for (int j = i; j < n; ++j) H[k][j] -= q * H[i][j];
    }
  IntMatrix out(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = static_cast<long long>(H[i][j]);
  return out;
}

struct UnitLattice {
  IntMatrix basis;  // Hermite normal form
  std::uint64_t det = 1;
  std::uint64_t ops = 0;
  std::uint64_t verify_ops = 0;
};

inline std::uint64_t HermiteDeterminant(const IntMatrix& H) {
  std::uint64_t d = 1;
  for (std::size_t i = 0; i < H.size(); ++i) d *= static_cast<std::uint64_t>(H[i][i]);
  return d;
}

// k * x by double-and-add.
template <class G>
typename G::Element Multiple(const G& grp, typename G::Element x, long long k) {
  if (k < 0) {
    x = grp.Neg(x);
    k = -k;
  }
  std::optional<typename G::Element> r;
  while (k) {
    if (k & 1) r = r ? grp.Add(*r, x) : x;
    k >>= 1;
    if (k) x = grp.Add(x, x);
  }
  return r ? *r : grp.Identity();
}

// Sum of r_i g_i.
template <class G>
typename G::Element Walk(const G& grp, const std::vector<typename G::Element>& gens, const std::vector<long long>& r) {
  std::optional<typename G::Element> acc;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    auto term = Multiple(grp, gens[i], r[i]);
    acc = acc ? grp.Add(*acc, term) : term;
  }
  return acc ? *acc : grp.Identity();
}

struct BsgsProgress {
  int generator = 0;
  std::uint64_t ops = 0;
  std::size_t table = 0;
  long long baby = 0;  // current baby-step length y
  long long order = 0;  // m_j once found, else 0
};

struct BsgsOptions {
  int threads = 1;
  std::size_t initial_entries = std::size_t{1} << 10;  // hash table reservation, doubled on growth
  std::size_t mem_cap_bytes = 0;                      // 0 = unlimited
  std::string checkpoint_path;                        // empty = no checkpoint
  std::function<void(const BsgsProgress&)> progress;
};

namespace detail {

inline void WriteCheckpoint(const std::string& path, std::uint64_t digest, int n, const IntMatrix& rel) {
  if (path.empty()) return;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "ffinfra-bsgs-checkpoint 1\n" << "digest " << digest << "\n" << "rank " << n << "\n";
    for (auto& row : rel) {
      out << "relation";
      for (long long x : row) out << ' ' << x;
      out << '\n';
    }
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot move checkpoint into place: " + path);
}

inline IntMatrix ReadCheckpoint(const std::string& path, std::uint64_t digest, int n) {
  IntMatrix rel;
  if (path.empty()) return rel;
  std::ifstream in(path);
  if (!in) return rel;
  std::string line, word;
  std::getline(in, line);
  if (line != "ffinfra-bsgs-checkpoint 1") throw std::runtime_error("unrecognized checkpoint file " + path);
  std::uint64_t dg = 0;
  int rank = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "digest") {
      ls >> dg;
    } else if (word == "rank") {
      ls >> rank;
    } else if (word == "relation") {
      std::vector<long long> row;
      long long x;
      while (ls >> x) row.push_back(x);
      if (static_cast<int>(row.size()) != n) throw std::runtime_error("checkpoint relation has the wrong length");
      rel.push_back(std::move(row));
    }
  }
  if (dg != digest || rank != n) throw std::runtime_error("checkpoint belongs to a different curve: " + path);
  for (std::size_t j = 0; j < rel.size(); ++j)
    if (rel[j][j] <= 0) throw std::runtime_error("checkpoint relation is not triangular");
  return rel;
}

inline std::vector<std::pair<long long, int>> Factor(long long m) {
  std::vector<std::pair<long long, int>> f;
  for (long long p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.push_back({p, e});
    }
  if (m > 1) f.push_back({m, 1});
  return f;
}

// Minimal m > 0 with m g_j in H = <g_0, ..., g_{j-1}> and a representation
// m g_j = sum c_i g_i. H is presented by the triangular relations found so far,
// whose diagonal gives the box prod [0, m_i) of coset representatives.
template <class G>
class GeneratorSearch {
 public:
  using E = typename G::Element;

  GeneratorSearch(const G& grp, const std::vector<E>& gens, const std::vector<long long>& m, int j,
                  const BsgsOptions& opt)
      : grp_(grp), gens_(gens), m_(m), j_(j), opt_(opt) {}

  std::pair<long long, std::vector<long long>> Run() {
    Split();
    BuildBoxes();
    table_.reserve(opt_.initial_entries);
    std::size_t reserved = opt_.initial_entries;
    E Y = gens_[j_];  // y * g_j
    for (long long y = 1;; y *= 2) {
      if (y > 1) Y = grp_.Add(Y, Y);
      if (auto hit = ExtendBaby(y)) return *hit;
      if (table_.size() > reserved) {
        reserved *= 2;
        table_.reserve(reserved);
      }
      CheckMemory();
      const long long kmax = std::max<long long>(1, (static_cast<long long>(T_.size()) * y + S_.size() - 1) / S_.size());
      if (auto hit = Giants(Y, y, kmax)) {
        auto [M, rep] = *hit;
        if (M <= y) Minimize(M, rep);
        Report(y, M);
        return {M, rep};
      }
      Report(y, 0);
    }
  }

 private:
  struct Entry {
    long long r;
    std::uint32_t t;
  };

  void Split() {
    std::uint64_t N = 1;
    for (int i = 0; i < j_; ++i) N *= static_cast<std::uint64_t>(m_[i]);
    std::uint64_t target = 1;
    while (target * target < N) ++target;
    a_.assign(j_, 1);
    std::uint64_t prod = 1;
    for (int i = 0; i < j_; ++i) {
      if (prod * static_cast<std::uint64_t>(m_[i]) <= target) {
        a_[i] = m_[i];
      } else {
        a_[i] = static_cast<long long>(std::max<std::uint64_t>(1, target / prod));
      }
      prod *= static_cast<std::uint64_t>(a_[i]);
    }
    covers_ = true;
    for (int i = 0; i < j_; ++i) covers_ = covers_ && a_[i] == m_[i];
  }

  // T: sum u_i g_i with 0 <= u_i < a_i; S: sum a_i w_i g_i with 0 <= w_i < ceil(m_i / a_i).
  void BuildBoxes() {
    T_ = {grp_.Identity()};
    Texp_ = {std::vector<long long>(j_, 0)};
    S_ = {grp_.Identity()};
    Sexp_ = {std::vector<long long>(j_, 0)};
    for (int i = 0; i < j_; ++i) {
      Grow(T_, Texp_, i, gens_[i], 1, a_[i]);
      const long long w = (m_[i] + a_[i] - 1) / a_[i];
      if (w > 1) Grow(S_, Sexp_, i, Multiple(grp_, gens_[i], a_[i]), a_[i], w);
    }
    negS_.reserve(S_.size());
    for (std::size_t s = 0; s < S_.size(); ++s) negS_.push_back(s == 0 ? S_[0] : grp_.Neg(S_[s]));
    rowcur_ = T_;
  }

  void Grow(std::vector<E>& els, IntMatrix& exps, int i, const E& step, long long unit, long long count) {
    const std::size_t base = els.size();
    for (long long u = 1; u < count; ++u)
      for (std::size_t b = 0; b < base; ++b) {
        const std::size_t prev = (u - 1) * base + b;
        els.push_back(grp_.Add(els[prev], step));
        auto e = exps[prev];
        e[i] += unit;
        exps.push_back(std::move(e));
      }
  }

  // Inserts T + r g_j for r < y. When T is all of H the first collision is the answer.
  std::optional<std::pair<long long, std::vector<long long>>> ExtendBaby(long long y) {
    for (long long r = built_; r < y; ++r) {
      for (std::size_t t = 0; t < T_.size(); ++t) {
        if (r > 0) rowcur_[t] = grp_.Add(rowcur_[t], gens_[j_]);
        auto [it, fresh] = table_.try_emplace(grp_.Label(rowcur_[t]), Entry{r, static_cast<std::uint32_t>(t)});
        if (!fresh && covers_) {
          // T[t] + r g_j = T[t'] + r' g_j.
          std::vector<long long> rep(j_);
          for (int i = 0; i < j_; ++i) rep[i] = Texp_[it->second.t][i] - Texp_[t][i];
          built_ = r + 1;
          Report(y, r - it->second.r);
          return std::make_pair(r - it->second.r, rep);
        }
      }
      built_ = r + 1;
    }
    return std::nullopt;
  }

  // Giant steps k * Y - s for k = 1..kmax, all s; the first k with a hit wins.
  std::optional<std::pair<long long, std::vector<long long>>> Giants(const E& Y, long long y, long long kmax) {
    const int threads = std::max(1, opt_.threads);
    struct Hit {
      long long k = 0, r = -1;
      std::uint32_t t = 0;
      std::size_t s = 0;
    };
    auto scan = [&](long long k0, long long k1) {
      Hit best;
      E P = Multiple(grp_, Y, k0);
      for (long long k = k0; k < k1; ++k) {
        if (k > k0) P = grp_.Add(P, Y);
        for (std::size_t s = 0; s < S_.size(); ++s) {
          const E x = s == 0 ? P : grp_.Add(P, negS_[s]);
          auto it = table_.find(grp_.Label(x));
          if (it != table_.end() && it->second.r > best.r) best = Hit{k, it->second.r, it->second.t, s};
        }
        if (best.r >= 0) return best;
      }
      return best;
    };
    Hit best;
    if (threads == 1 || kmax < 2 * threads) {
      best = scan(1, kmax + 1);
    } else {
      std::vector<Hit> hits(threads);
      std::vector<std::thread> pool;
      const long long chunk = (kmax + threads - 1) / threads;
      for (int w = 0; w < threads; ++w) {
        const long long k0 = 1 + w * chunk, k1 = std::min(kmax + 1, k0 + chunk);
        if (k0 >= k1) break;
        pool.emplace_back([&, w, k0, k1] { hits[w] = scan(k0, k1); });
      }
      for (auto& th : pool) th.join();
      for (auto& h : hits)
        if (h.r >= 0 && (best.r < 0 || h.k < best.k || (h.k == best.k && h.r > best.r))) best = h;
    }
    if (best.r < 0) return std::nullopt;
    std::vector<long long> rep(j_);
    for (int i = 0; i < j_; ++i) rep[i] = Texp_[best.t][i] + Sexp_[best.s][i];
    return std::make_pair(best.k * y - best.r, rep);
  }

  std::optional<std::vector<long long>> Member(const E& x) {
    for (std::size_t s = 0; s < S_.size(); ++s) {
      const E z = s == 0 ? x : grp_.Add(x, negS_[s]);
      auto it = table_.find(grp_.Label(z));
      if (it != table_.end() && it->second.r == 0) {
        std::vector<long long> rep(j_);
        for (int i = 0; i < j_; ++i) rep[i] = Texp_[it->second.t][i] + Sexp_[s][i];
        return rep;
      }
    }
    return std::nullopt;
  }

  void Minimize(long long& M, std::vector<long long>& rep) {
    for (auto [p, e] : Factor(M)) {
      for (int k = 0; k < e; ++k) {
        auto r = Member(Multiple(grp_, gens_[j_], M / p));
        if (!r) break;
        M /= p;
        rep = *r;
      }
    }
  }

  void CheckMemory() const {
    if (opt_.mem_cap_bytes == 0 || table_.empty()) return;
    const std::size_t per = table_.begin()->first.size() + sizeof(Entry) + 64;
    if (2 * table_.size() * per > opt_.mem_cap_bytes)
      throw MemoryCapExceeded("baby-step table would exceed the memory cap at generator " + std::to_string(j_ + 1));
  }

  void Report(long long y, long long order) const {
    if (!opt_.progress) return;
    opt_.progress(BsgsProgress{j_ + 1, grp_.ops(), table_.size(), y, order});
  }

  const G& grp_;
  const std::vector<E>& gens_;
  const std::vector<long long>& m_;
  const int j_;
  const BsgsOptions& opt_;
  std::vector<long long> a_;
  bool covers_ = false;
  std::vector<E> T_, S_, negS_, rowcur_;
  IntMatrix Texp_, Sexp_;
  std::unordered_map<std::string, Entry> table_;
  long long built_ = 0;
};

}  // namespace detail

// Relation lattice of the generators of `grp` by one baby-step giant-step
// search per generator. Every relation is walked back to the identity.
template <class G>
UnitLattice BsgsLattice(const G& grp, const BsgsOptions& opt = {}, std::uint64_t digest = 0) {
  using E = typename G::Element;
  const int n = grp.rank();
  UnitLattice out;
  if (n == 0) return out;
  std::vector<E> gens;
  for (int i = 0; i < n; ++i) gens.push_back(grp.Generator(i));
  IntMatrix rel = detail::ReadCheckpoint(opt.checkpoint_path, digest, n);
  std::vector<long long> m;
  for (auto& r : rel) m.push_back(r[m.size()]);
  const std::uint64_t ops0 = grp.ops();
  for (int j = static_cast<int>(rel.size()); j < n; ++j) {
    detail::GeneratorSearch<G> search(grp, gens, m, j, opt);
    std::pair<long long, std::vector<long long>> found;
    try {
      found = search.Run();
    } catch (const MemoryCapExceeded&) {
      detail::WriteCheckpoint(opt.checkpoint_path, digest, n, rel);
      throw;
    }
    std::vector<long long> row(n, 0);
    for (int i = 0; i < j; ++i) row[i] = -found.second[i];
    row[j] = found.first;
    rel.push_back(row);
    m.push_back(found.first);
    detail::WriteCheckpoint(opt.checkpoint_path, digest, n, rel);
  }
  out.ops = grp.ops() - ops0;
  const std::string id = grp.Label(grp.Identity());
  for (auto& row : rel)
    if (grp.Label(Walk(grp, gens, row)) != id) throw std::logic_error("relation does not return to the identity");
  out.verify_ops = grp.ops() - ops0 - out.ops;
  out.basis = HermiteForm(rel, n);
  out.det = HermiteDeterminant(out.basis);
  return out;
}

// Relation lattice by breadth-first enumeration of the generated subgroup.
template <class G>
UnitLattice BruteForceLattice(const G& grp, std::uint64_t bound) {
  using E = typename G::Element;
  const int n = grp.rank();
  UnitLattice out;
  if (n == 0) return out;
  std::vector<E> gens;
  for (int i = 0; i < n; ++i) gens.push_back(grp.Generator(i));
  const std::uint64_t ops0 = grp.ops();
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<E> queue{grp.Identity()};
  IntMatrix exps{std::vector<long long>(n, 0)};
  seen.emplace(grp.Label(queue[0]), 0);
  IntMatrix rel;
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (int i = 0; i < n; ++i) {
      E next = grp.Add(queue[q], gens[i]);
      auto v = exps[q];
      ++v[i];
      auto [it, fresh] = seen.emplace(grp.Label(next), queue.size());
      if (fresh) {
        if (queue.size() >= bound) throw std::runtime_error("brute-force enumeration exceeded the bound");
        queue.push_back(std::move(next));
        exps.push_back(std::move(v));
      } else {
        for (int k = 0; k < n; ++k) v[k] -= exps[it->second][k];
        rel.push_back(std::move(v));
      }
    }
  out.ops = grp.ops() - ops0;
  out.basis = HermiteForm(rel, n);
  out.det = HermiteDeterminant(out.basis);
  if (out.det != queue.size()) throw std::logic_error("enumeration size disagrees with the relation lattice");
  return out;
}

// fRep(O_K) with generators g_i = reduce(O_K, e_i).
class FRepGroup {
 public:
  using Element = FRep;

  explicit FRepGroup(const Infrastructure& X) : X_(X) {
    if (X.field().distinguished().degree != 1)
      throw UnsupportedConfiguration("relation-lattice search needs a degree-one distinguished infinite place");
  }

  int rank() const { return X_.rank(); }
  Element Identity() const { return X_.Identity(); }
  Element Generator(int i) const {
    DistanceVec e(X_.rank(), 0);
    e[i] = 1;
    ops_.fetch_add(1, std::memory_order_relaxed);
    return X_.FromDistance(X_.ideals().Unit(), e);
  }
  Element Add(const Element& a, const Element& b) const {
    ops_.fetch_add(1, std::memory_order_relaxed);
    return X_.Add(a, b);
  }
  Element Neg(const Element& a) const {
    ops_.fetch_add(1, std::memory_order_relaxed);
    return X_.Neg(a);
  }
  std::string Label(const Element& a) const { return X_.Label(a); }
  std::uint64_t ops() const { return ops_.load(); }

 private:
  const Infrastructure& X_;
  mutable std::atomic<std::uint64_t> ops_{0};
};

inline std::vector<FRep> Generators(const Infrastructure& X) {
  FRepGroup G(X);
  std::vector<FRep> out;
  for (int i = 0; i < G.rank(); ++i) out.push_back(G.Generator(i));
  return out;
}

// R = det(Lambda) * prod_{i <= n} deg p_i.
inline std::uint64_t Regulator(const UnitLattice& L, const FunctionField& K) {
  std::uint64_t R = L.det;
  for (int i = 0; i < K.unit_rank(); ++i) R *= static_cast<std::uint64_t>(K.places()[i].degree);
  return R;
}

// G = Z^n / L with generators e_i; elements are reduced modulo the Hermite form
// of L, reduce(v) is v mod L and a giant step is group addition.
class AbstractInfra {
 public:
  using Element = std::vector<long long>;

  explicit AbstractInfra(const IntMatrix& relations, int n) : H_(HermiteForm(relations, n)), n_(n) {}

  int rank() const { return n_; }
  const IntMatrix& hnf() const { return H_; }
  std::uint64_t order() const { return HermiteDeterminant(H_); }

  Element Reduce(Element v) const {
    for (int i = 0; i < n_; ++i) {
      long long q = v[i] / H_[i][i];
      if (v[i] % H_[i][i] < 0) --q;
      if (q != 0)
        for (int k = i; k < n_; ++k) v[k] -= q * H_[i][k];
    }
    return v;
  }
  Element Identity() const { return Element(n_, 0); }
  Element Generator(int i) const {
    Element e(n_, 0);
    e[i] = 1;
    return Reduce(e);
  }
  Element Add(const Element& a, const Element& b) const {
    ops_.fetch_add(1, std::memory_order_relaxed);
    Element c(n_);
    for (int i = 0; i < n_; ++i) c[i] = a[i] + b[i];
    return Reduce(c);
  }
  Element Neg(const Element& a) const {
    ops_.fetch_add(1, std::memory_order_relaxed);
    Element c(n_);
    for (int i = 0; i < n_; ++i) c[i] = -a[i];
    return Reduce(c);
  }
  Element GiantStep(const Element& a, const Element& b) const { return Add(a, b); }
  std::string Label(const Element& a) const {
    ByteWriter w;
    for (long long x : a) w.U64(static_cast<std::uint64_t>(x));
    return w.Take();
  }
  std::uint64_t ops() const { return ops_.load(); }

 private:
  IntMatrix H_;
  int n_;
  mutable std::atomic<std::uint64_t> ops_{0};
};

}  // namespace ffinfra
