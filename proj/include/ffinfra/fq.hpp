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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ffinfra {

// Elements of F_q are encoded as integers in [0, q): the element
// c_0 + c_1*a + ... + c_{e-1}*a^{e-1} has code c_0 + c_1*p + ... .
using Elem = std::uint32_t;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  // Ascending coefficients of the monic modulus (size e + 1); empty if e == 1.
  std::vector<std::uint32_t> modulus;

  std::uint64_t q() const {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= p;
    return r;
  }
  bool operator==(const FieldSpec&) const = default;
};

namespace detail {

inline bool IsPrimeU32(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomial helpers over F_p used only to validate a modulus.
inline std::vector<std::uint32_t> TrimP(std::vector<std::uint32_t> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline std::uint32_t InvModP(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t qq = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
    std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
  }
  if (r != 1) throw ArithmeticError("element not invertible");
  return static_cast<std::uint32_t>((t % static_cast<std::int64_t>(p) + p) % p);
}

inline std::vector<std::uint32_t> RemP(std::vector<std::uint32_t> a,
                                       const std::vector<std::uint32_t>& b,
                                       std::uint32_t p) {
  a = TrimP(std::move(a));
  const std::size_t db = b.size() - 1;
  const std::uint32_t inv = InvModP(b.back(), p);
  while (a.size() > db) {
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = static_cast<std::uint32_t>(
          (a[shift + i] + (p - c) * b[i]) % p);
    a = TrimP(std::move(a));
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool IsIrreducibleSmall(const std::vector<std::uint32_t>& m,
                               std::uint32_t p) {
  const std::size_t n = m.size() - 1;
  for (std::size_t k = 1; 2 * k <= n; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> f(k + 1, 0);
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      f[k] = 1;
      if (RemP(m, f, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

// Arithmetic context for F_q, q = p^e < 2^16. Multiplication uses
// discrete log tables; addition in proper extensions uses a table when
// q <= 1024 and digit-wise arithmetic otherwise.
class Fq {
 public:
  explicit Fq(FieldSpec spec) : spec_(std::move(spec)) {
    if (!detail::IsPrimeU32(spec_.p))
      throw FieldError("characteristic " + std::to_string(spec_.p) +
                       " is not prime");
    if (spec_.e == 0) throw FieldError("extension degree must be >= 1");
    if (spec_.e == 1) {
      spec_.modulus.clear();
    } else {
      if (spec_.modulus.size() != spec_.e + 1 || spec_.modulus.back() != 1)
        throw FieldError("modulus must be monic of degree e");
      for (auto& c : spec_.modulus) {
        if (c >= spec_.p) throw FieldError("modulus coefficient out of range");
      }
      if (!detail::IsIrreducibleSmall(spec_.modulus, spec_.p))
        throw FieldError("modulus is reducible over F_p");
    }
    const std::uint64_t q = spec_.q();
    if (q >= (1u << 16)) throw FieldError("field size must be below 65536");
    q_ = static_cast<std::uint32_t>(q);
    BuildTables();
  }

  static Fq Prime(std::uint32_t p) { return Fq(FieldSpec{p, 1, {}}); }

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  std::uint32_t e() const { return spec_.e; }
  std::uint32_t q() const { return q_; }
  bool IsPrimeField() const { return spec_.e == 1; }

  Elem Zero() const { return 0; }
  Elem One() const { return 1; }
  // The generator a of F_p[a]/(modulus), or 1 for a prime field.
  Elem Gen() const { return spec_.e == 1 ? 1 : spec_.p; }

  Elem FromInt(std::int64_t v) const {
    const std::int64_t p = spec_.p;
    return static_cast<Elem>(((v % p) + p) % p);
  }

  std::vector<std::uint32_t> Coords(Elem a) const {
    std::vector<std::uint32_t> c(spec_.e, 0);
    for (std::uint32_t i = 0; i < spec_.e; ++i) {
      c[i] = a % spec_.p;
      a /= spec_.p;
    }
    return c;
  }

  Elem FromCoords(const std::vector<std::uint32_t>& c) const {
    if (c.size() != spec_.e) throw FieldError("wrong coordinate count");
    Elem r = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= spec_.p) throw FieldError("coordinate out of range");
      r = r * spec_.p + c[i];
    }
    return r;
  }

  Elem Add(Elem a, Elem b) const {
    if (spec_.e == 1) {
      Elem s = a + b;
      return s >= spec_.p ? s - spec_.p : s;
    }
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return AddDigits(a, b);
  }

  Elem Neg(Elem a) const {
    if (spec_.e == 1) return a == 0 ? 0 : spec_.p - a;
    return neg_table_[a];
  }

  Elem Sub(Elem a, Elem b) const { return Add(a, Neg(b)); }

  Elem Mul(Elem a, Elem b) const {
    if (spec_.e == 1)
      return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % spec_.p);
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  Elem Inv(Elem a) const {
    if (a == 0) throw ArithmeticError("division by zero in F_q");
    if (spec_.e == 1) return inv_prime_[a];
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Elem Div(Elem a, Elem b) const { return Mul(a, Inv(b)); }

  Elem Pow(Elem a, std::uint64_t k) const {
    if (k == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t l = (static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1))) % (q_ - 1);
    return exp_[l];
  }

  // Discrete logarithm with respect to the fixed primitive element.
  std::uint32_t Log(Elem a) const {
    if (a == 0) throw ArithmeticError("log of zero");
    return log_[a];
  }
  Elem Primitive() const { return exp_[1]; }

  bool IsSquare(Elem a) const {
    if (a == 0) return true;
    if (spec_.p == 2) return true;
    return log_[a] % 2 == 0;
  }

  // Some square root of a square; throws otherwise.
  Elem Sqrt(Elem a) const {
    if (a == 0) return 0;
    if (spec_.p == 2) return exp_[(static_cast<std::uint64_t>(log_[a]) * (q_ / 2)) % (q_ - 1)];
    if (log_[a] % 2 != 0) throw ArithmeticError("not a square");
    return exp_[log_[a] / 2];
  }

  std::string ToString(Elem a) const {
    if (spec_.e == 1) return std::to_string(a);
    auto c = Coords(a);
    std::string s;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(c[i]);
      } else {
        if (c[i] != 1) s += std::to_string(c[i]) + "*";
        s += (i == 1) ? "a" : "a^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  Elem AddDigits(Elem a, Elem b) const {
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < spec_.e; ++i) {
      Elem s = a % spec_.p + b % spec_.p;
      if (s >= spec_.p) s -= spec_.p;
      r += s * scale;
      scale *= spec_.p;
      a /= spec_.p;
      b /= spec_.p;
    }
    return r;
  }

  Elem NegDigits(Elem a) const {
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < spec_.e; ++i) {
      Elem c = a % spec_.p;
      r += (c == 0 ? 0 : spec_.p - c) * scale;
      scale *= spec_.p;
      a /= spec_.p;
    }
    return r;
  }

  // Schoolbook product of codes modulo the defining polynomial.
  Elem MulSlow(Elem a, Elem b) const {
    const std::uint32_t p = spec_.p, e = spec_.e;
    if (e == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p);
    std::vector<std::uint64_t> ca(e), cb(e), prod(2 * e - 1, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
      ca[i] = a % p; a /= p;
      cb[i] = b % p; b /= p;
    }
    for (std::uint32_t i = 0; i < e; ++i)
      for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
    for (std::uint32_t k = 2 * e - 1; k-- > e;) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      for (std::uint32_t i = 0; i < e; ++i)
        prod[k - e + i] = (prod[k - e + i] + (p - c) * spec_.modulus[i]) % p;
      prod[k] = 0;
    }
    Elem r = 0;
    for (std::uint32_t i = e; i-- > 0;) r = r * p + static_cast<Elem>(prod[i]);
    return r;
  }

  void BuildTables() {
    const std::uint32_t q = q_;
    if (spec_.e == 1) {
      inv_prime_.assign(q, 0);
      for (std::uint32_t a = 1; a < q; ++a) inv_prime_[a] = detail::InvModP(a, q);
    } else {
      neg_table_.resize(q);
      for (Elem a = 0; a < q; ++a) neg_table_[a] = NegDigits(a);
      if (q <= 1024) {
        add_table_.resize(static_cast<std::size_t>(q) * q);
        for (Elem a = 0; a < q; ++a)
          for (Elem b = 0; b < q; ++b) add_table_[a * q + b] = AddDigits(a, b);
      }
    }
    log_.assign(q, 0);
    exp_.assign(2 * static_cast<std::size_t>(q), 0);
    if (q == 2) {
      exp_[0] = exp_[1] = exp_[2] = 1;
      return;
    }
    // Search for a primitive element; the modulus is irreducible so one exists.
    std::vector<std::uint32_t> prime_factors;
    {
      std::uint32_t n = q - 1;
      for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
          prime_factors.push_back(d);
          while (n % d == 0) n /= d;
        }
      }
      if (n > 1) prime_factors.push_back(n);
    }
    auto pow_slow = [&](Elem a, std::uint64_t k) {
      Elem r = 1;
      while (k) {
        if (k & 1) r = MulSlow(r, a);
        a = MulSlow(a, a);
        k >>= 1;
      }
      return r;
    };
    Elem g = 0;
    for (Elem cand = 2; cand < q; ++cand) {
      bool ok = true;
      for (auto r : prime_factors) {
        if (pow_slow(cand, (q - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g = cand;
        break;
      }
    }
    if (g == 0) throw FieldError("no primitive element found");
    Elem cur = 1;
    for (std::uint32_t k = 0; k < q - 1; ++k) {
      exp_[k] = cur;
      exp_[k + q - 1] = cur;
      log_[cur] = k;
      cur = MulSlow(cur, g);
    }
  }

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> inv_prime_;
  std::vector<Elem> add_table_;
  std::vector<Elem> neg_table_;
};

}  // namespace ffinfra
