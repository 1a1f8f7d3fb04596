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
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffinfra/ffield.hpp"
#include "ffinfra/intbasis.hpp"

namespace ffinfra {

// Malformed text; carries the 1-based position.
class CurveSyntaxError : public std::runtime_error {
 public:
  CurveSyntaxError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// Well-formed text describing an invalid curve or field.
class CurveSemanticError : public std::runtime_error {
 public:
  CurveSemanticError(int line, const std::string& msg)
      : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + msg) {}
};

// Polynomial in x and y over F_q: (deg_x, deg_y) -> coefficient.
using BiPoly = std::map<std::pair<int, int>, Elem>;

struct CurveFile {
  std::string name;
  FieldSpec base;
  std::vector<Poly> equation;  // monic in y, ascending powers of y
  std::optional<BasisRows> finite;
  std::optional<BasisRows> infinite;
  std::optional<int> genus_hint;
  int distinguished = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t mem_cap = 0;
  Poly y_scale = Poly({1});  // the equation is in Y = y_scale * y
};

namespace detail {

// Recursive-descent evaluation of integer polynomial expressions in the
// variables allowed by `vars`; Ring supplies constants, variables and + - * ^.
template <class Ring>
class ExprParser {
 public:
  ExprParser(const Ring& ring, const std::string& text, int line, int col0)
      : ring_(ring), s_(text), line_(line), col0_(col0) {}

  typename Ring::Value Parse() {
    auto v = Sum();
    Skip();
    if (pos_ != s_.size()) Fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  using V = typename Ring::Value;

  [[noreturn]] void Fail(const std::string& msg) const {
    throw CurveSyntaxError(line_, col0_ + static_cast<int>(pos_), msg);
  }
  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool Eat(char c) {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  V Sum() {
    V acc = Product();
    for (;;) {
      if (Eat('+'))
        acc = ring_.Add(acc, Product());
      else if (Eat('-'))
        acc = ring_.Sub(acc, Product());
      else
        return acc;
    }
  }
  V Product() {
    V acc = Unary();
    while (Eat('*')) acc = ring_.Mul(acc, Unary());
    return acc;
  }
  V Unary() {
    if (Eat('-')) return ring_.Neg(Unary());
    if (Eat('+')) return Unary();
    return Power();
  }
  V Power() {
    V base = Atom();
    if (Eat('^')) {
      Skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) Fail("expected a nonnegative integer exponent");
      if (pos_ - start > 6) Fail("exponent too large");
      return ring_.Pow(base, std::stoul(s_.substr(start, pos_ - start)));
    }
    return base;
  }
  V Atom() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      V v = Sum();
      if (!Eat(')')) Fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ - start > 18) Fail("integer literal too long");
      return ring_.Constant(std::stoll(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      auto v = ring_.Variable(name);
      if (!v) {
        pos_ = start;
        Fail("unknown variable '" + name + "'");
      }
      return *v;
    }
    Fail("unexpected '" + std::string(1, c) + "'");
  }

  const Ring& ring_;
  const std::string& s_;
  int line_, col0_;
  std::size_t pos_ = 0;
};

// Univariate polynomials in `a` over F_p, for the extension modulus.
struct ModulusRing {
  using Value = std::vector<std::int64_t>;
  std::int64_t p;
  Value Norm(Value v) const {
    for (auto& c : v) c = ((c % p) + p) % p;
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  }
  Value Constant(std::int64_t c) const { return Norm({c}); }
  std::optional<Value> Variable(const std::string& n) const {
    if (n == "a") return Value{0, 1};
    return std::nullopt;
  }
  Value Add(Value a, const Value& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return Norm(a);
  }
  Value Neg(Value a) const {
    for (auto& c : a) c = -c;
    return Norm(a);
  }
  Value Sub(const Value& a, const Value& b) const { return Add(a, Neg(b)); }
  Value Mul(const Value& a, const Value& b) const {
    if (a.empty() || b.empty()) return {};
    Value r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return Norm(r);
  }
  Value Pow(Value a, unsigned long k) const {
    Value r{1};
    for (unsigned long i = 0; i < k; ++i) r = Mul(r, a);
    return Norm(r);
  }
};

// Polynomials in x and y (and the generator a of F_q) over F_q.
struct BiRing {
  using Value = BiPoly;
  const Fq& F;
  bool allow_y = true;
  Value Norm(Value v) const {
    for (auto it = v.begin(); it != v.end();) it = it->second == 0 ? v.erase(it) : std::next(it);
    return v;
  }
  Value Constant(std::int64_t c) const { return Norm({{{0, 0}, F.FromInt(c)}}); }
  std::optional<Value> Variable(const std::string& n) const {
    if (n == "x") return Value{{{1, 0}, 1}};
    if (n == "y" && allow_y) return Value{{{0, 1}, 1}};
    if (n == "a" && F.e() > 1) return Value{{{0, 0}, F.Gen()}};
    return std::nullopt;
  }
  Value Add(Value a, const Value& b) const {
    for (auto& [k, c] : b) a[k] = F.Add(a[k], c);
    return Norm(a);
  }
  Value Neg(Value a) const {
    for (auto& [k, c] : a) c = F.Neg(c);
    return a;
  }
  Value Sub(const Value& a, const Value& b) const { return Add(a, Neg(b)); }
  Value Mul(const Value& a, const Value& b) const {
    Value r;
    for (auto& [ka, ca] : a)
      for (auto& [kb, cb] : b) {
        auto& slot = r[{ka.first + kb.first, ka.second + kb.second}];
        slot = F.Add(slot, F.Mul(ca, cb));
      }
    return Norm(r);
  }
  Value Pow(const Value& a, unsigned long k) const {
    Value r{{{0, 0}, 1}};
    for (unsigned long i = 0; i < k; ++i) r = Mul(r, a);
    return r;
  }
};

// Coefficients in y of a bivariate polynomial, as polynomials in x.
inline std::vector<Poly> YCoefficients(const BiPoly& f) {
  int dy = 0;
  for (auto& [k, c] : f) dy = std::max(dy, k.second);
  std::vector<std::vector<Elem>> co(dy + 1);
  for (auto& [k, c] : f) {
    auto& v = co[k.second];
    if (static_cast<int>(v.size()) <= k.first) v.resize(k.first + 1, 0);
    v[k.first] = c;
  }
  std::vector<Poly> out;
  for (auto& v : co) out.push_back(Poly(v));
  return out;
}

struct RawLine {
  int line;
  int value_col;
  std::string value;
};

}  // namespace detail

// Parses the line-oriented key = value curve format.
inline CurveFile ParseCurve(const std::string& text) {
  static const std::vector<std::string> kSingle = {"name",  "p",        "modulus", "curve",   "omega_den",
                                                   "omega_inf_den", "genus_hint", "distinguished", "seed",
                                                   "threads", "mem_cap"};
  std::map<std::string, detail::RawLine> single;
  std::vector<detail::RawLine> omega, omega_inf;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::size_t hash = raw.find('#');
    const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw CurveSyntaxError(lineno, static_cast<int>(first) + 1, "expected 'key = value'");
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (key.empty()) throw CurveSyntaxError(lineno, static_cast<int>(first) + 1, "missing key");
    std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
    if (vstart == std::string::npos) throw CurveSyntaxError(lineno, static_cast<int>(eq) + 2, "missing value");
    std::string value = line.substr(vstart);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
    detail::RawLine rl{lineno, static_cast<int>(vstart) + 1, value};
    if (key == "omega") {
      omega.push_back(rl);
    } else if (key == "omega_inf") {
      omega_inf.push_back(rl);
    } else if (std::find(kSingle.begin(), kSingle.end(), key) != kSingle.end()) {
      if (single.count(key)) throw CurveSyntaxError(lineno, static_cast<int>(first) + 1, "duplicate key '" + key + "'");
      single[key] = rl;
    } else {
      throw CurveSyntaxError(lineno, static_cast<int>(first) + 1, "unknown key '" + key + "'");
    }
  }

  auto integer = [&](const std::string& key, std::int64_t lo, std::int64_t hi) -> std::optional<std::int64_t> {
    auto it = single.find(key);
    if (it == single.end()) return std::nullopt;
    const auto& rl = it->second;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(rl.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != rl.value.size() || used == 0) throw CurveSyntaxError(rl.line, rl.value_col, "expected an integer");
    if (v < lo || v > hi) throw CurveSemanticError(rl.line, key + " out of range");
    return v;
  };

  CurveFile cf;
  if (single.count("name")) cf.name = single["name"].value;
  auto p = integer("p", 2, 65521);
  if (!p) throw CurveSemanticError(0, "missing required key 'p'");
  cf.base.p = static_cast<std::uint32_t>(*p);
  if (!detail::IsPrimeU32(cf.base.p)) throw CurveSemanticError(single["p"].line, "p is not prime");
  if (single.count("modulus")) {
    const auto& rl = single["modulus"];
    detail::ModulusRing mr{*p};
    auto m = detail::ExprParser<detail::ModulusRing>(mr, rl.value, rl.line, rl.value_col).Parse();
    if (m.size() < 3) throw CurveSemanticError(rl.line, "modulus must have degree at least 2");
    if (m.back() != 1) throw CurveSemanticError(rl.line, "modulus must be monic");
    cf.base.e = static_cast<std::uint32_t>(m.size() - 1);
    for (auto c : m) cf.base.modulus.push_back(static_cast<std::uint32_t>(c));
    if (!detail::IsIrreducibleSmall(cf.base.modulus, cf.base.p)) throw CurveSemanticError(rl.line, "modulus is reducible");
  }
  if (cf.base.q() > 65536) throw CurveSemanticError(0, "field too large (q must be at most 65536)");
  Fq F(cf.base);
  PolyRing R(F);

  if (!single.count("curve")) throw CurveSemanticError(0, "missing required key 'curve'");
  const auto& crl = single["curve"];
  detail::BiRing br{F, true};
  std::vector<Poly> eq = detail::YCoefficients(detail::ExprParser<detail::BiRing>(br, crl.value, crl.line, crl.value_col).Parse());
  if (eq.size() < 2) throw CurveSemanticError(crl.line, "curve must have positive degree in y");
  const bool have_bases = !omega.empty() || !omega_inf.empty();
  const Poly lc = eq.back();
  if (lc.Deg() == 0) {
    const Elem inv = F.Inv(lc.Lc());
    for (auto& c : eq) c = R.Scale(c, inv);
  } else {
    if (have_bases) throw CurveSemanticError(crl.line, "supplied bases need an equation monic in y");
    // F(x, y) = sum c_j y^j; with Y = c_d y the equation sum c_j c_d^{d-1-j} Y^j is monic.
    const int d = static_cast<int>(eq.size()) - 1;
    for (int j = 0; j < d; ++j) eq[j] = R.Mul(eq[j], R.Pow(lc, d - 1 - j));
    eq[d] = R.One();
    cf.y_scale = lc;
  }
  cf.equation = eq;
  const int d = static_cast<int>(eq.size()) - 1;

  auto basis = [&](const std::vector<detail::RawLine>& lines, const char* den_key) -> std::optional<BasisRows> {
    if (lines.empty()) {
      if (single.count(den_key)) throw CurveSemanticError(single[den_key].line, std::string(den_key) + " without basis rows");
      return std::nullopt;
    }
    if (static_cast<int>(lines.size()) != d)
      throw CurveSemanticError(lines.back().line, "expected " + std::to_string(d) + " basis rows");
    BasisRows B{PolyMatrix(d, d), R.One()};
    if (single.count(den_key)) {
      const auto& rl = single[den_key];
      detail::BiRing xr{F, false};
      auto den = detail::YCoefficients(detail::ExprParser<detail::BiRing>(xr, rl.value, rl.line, rl.value_col).Parse());
      if (den.empty() || den[0].IsZero()) throw CurveSemanticError(rl.line, "zero denominator");
      B.den = den[0];
    }
    for (int i = 0; i < d; ++i) {
      const auto& rl = lines[i];
      auto row = detail::YCoefficients(detail::ExprParser<detail::BiRing>(br, rl.value, rl.line, rl.value_col).Parse());
      if (static_cast<int>(row.size()) > d) throw CurveSemanticError(rl.line, "basis row has degree >= d in y");
      for (int j = 0; j < static_cast<int>(row.size()); ++j) B.num.at(i, j) = row[j];
    }
    return B;
  };
  cf.finite = basis(omega, "omega_den");
  cf.infinite = basis(omega_inf, "omega_inf_den");
  if (cf.finite.has_value() != cf.infinite.has_value())
    throw CurveSemanticError(0, "omega and omega_inf must be supplied together");

  if (auto g = integer("genus_hint", 0, 1 << 20)) cf.genus_hint = static_cast<int>(*g);
  if (auto v = integer("distinguished", 1, 1 << 20)) cf.distinguished = static_cast<int>(*v);
  if (auto v = integer("seed", 0, INT64_MAX)) cf.seed = static_cast<std::uint64_t>(*v);
  if (auto v = integer("threads", 1, 1024)) cf.threads = static_cast<int>(*v);
  if (auto v = integer("mem_cap", 0, INT64_MAX)) cf.mem_cap = static_cast<std::uint64_t>(*v);
  return cf;
}

// How the maximal orders of a parsed curve are obtained.
enum class BasisSource { kSupplied, kKummer, kRound2 };

inline BasisSource SourceOf(const CurveFile& cf) {
  if (cf.finite) return BasisSource::kSupplied;
  const int d = static_cast<int>(cf.equation.size()) - 1;
  bool pure = !cf.equation[0].IsZero() && cf.equation[0].Deg() >= 1;
  for (int j = 1; j < d; ++j) pure = pure && cf.equation[j].IsZero();
  if (pure && d % static_cast<int>(cf.base.p) != 0) return BasisSource::kKummer;
  return BasisSource::kRound2;
}

inline FieldInput BuildFieldInput(const CurveFile& cf) {
  Fq F(cf.base);
  PolyRing R(F);
  FieldInput in;
  switch (SourceOf(cf)) {
    case BasisSource::kKummer:
      in = KummerInput(cf.base, static_cast<int>(cf.equation.size()) - 1, R.Neg(cf.equation[0]), cf.name);
      break;
    case BasisSource::kSupplied:
      in.name = cf.name;
      in.base = cf.base;
      in.equation = cf.equation;
      in.finite = *cf.finite;
      in.infinite = *cf.infinite;
      break;
    case BasisSource::kRound2: {
      in.name = cf.name;
      in.base = cf.base;
      in.equation = cf.equation;
      Round2 r2(R, cf.equation);
      in.finite = r2.FiniteMaximalOrder();
      in.infinite = InfiniteMaximalOrder(R, cf.equation);
      break;
    }
  }
  in.distinguished = cf.distinguished;
  return in;
}

// Builds the field and checks the genus hint.
inline std::unique_ptr<FunctionField> BuildField(const CurveFile& cf) {
  auto K = std::make_unique<FunctionField>(BuildFieldInput(cf));
  if (cf.genus_hint && *cf.genus_hint != K->genus())
    throw CurveSemanticError(0, "genus hint " + std::to_string(*cf.genus_hint) + " disagrees with computed genus " +
                                    std::to_string(K->genus()));
  return K;
}

// Text of a polynomial in x, y over F_q in the curve-file syntax.
inline std::string FormatBiPoly(const Fq& F, const std::vector<Poly>& ycoeffs) {
  std::string out;
  for (int j = static_cast<int>(ycoeffs.size()) - 1; j >= 0; --j) {
    const Poly& c = ycoeffs[j];
    for (int i = c.Deg(); i >= 0; --i) {
      const Elem e = c.Coeff(i);
      if (e == 0) continue;
      std::string coef = F.ToString(e);
      if (coef.find('+') != std::string::npos) coef = "(" + coef + ")";
      std::string mono;
      if (i > 0) mono += i == 1 ? "x" : "x^" + std::to_string(i);
      if (j > 0) mono += std::string(mono.empty() ? "" : "*") + (j == 1 ? "y" : "y^" + std::to_string(j));
      if (!out.empty()) out += " + ";
      if (mono.empty())
        out += coef;
      else if (coef == "1")
        out += mono;
      else
        out += coef + "*" + mono;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace ffinfra
