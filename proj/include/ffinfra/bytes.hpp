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
#include <vector>

#include "ffinfra/fq.hpp"
#include "ffinfra/poly.hpp"

namespace ffinfra {

// Little-endian byte writers shared by digests and canonical encodings.
class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U16(std::uint32_t v) {
    U8(v & 0xff);
    U8((v >> 8) & 0xff);
  }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8((v >> (8 * i)) & 0xff);
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8((v >> (8 * i)) & 0xff);
  }
  void I32(std::int32_t v) { U32(static_cast<std::uint32_t>(v)); }

  // A field element as e little-endian base-p digits, each 16 bits wide.
  void Element(const Fq& F, Elem a) {
    for (std::uint32_t c : F.Coords(a)) U16(c);
  }

  // Length-prefixed polynomial: coefficient count, then ascending coefficients.
  void Polynomial(const Fq& F, const Poly& f) {
    U32(static_cast<std::uint32_t>(f.c.size()));
    for (Elem a : f.c) Element(F, a);
  }

  void Raw(const std::string& s) { out_ += s; }
  const std::string& str() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : in_(bytes) {}

  std::uint8_t U8() {
    if (pos_ >= in_.size()) throw std::invalid_argument("truncated byte string");
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t U16() {
    std::uint32_t lo = U8();
    return lo | (static_cast<std::uint32_t>(U8()) << 8);
  }
  std::uint32_t U32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(U8()) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(U8()) << (8 * i);
    return v;
  }
  std::int32_t I32() { return static_cast<std::int32_t>(U32()); }

  Elem Element(const Fq& F) {
    std::vector<std::uint32_t> c(F.e());
    for (auto& x : c) {
      x = U16();
      if (x >= F.p()) throw std::invalid_argument("coefficient digit out of range");
    }
    return F.FromCoords(c);
  }

  Poly Polynomial(const Fq& F) {
    const std::uint32_t n = U32();
    if (n > in_.size()) throw std::invalid_argument("polynomial length out of range");
    std::vector<Elem> c(n);
    for (auto& a : c) a = Element(F);
    if (n && c.back() == 0) throw std::invalid_argument("polynomial with zero leading coefficient");
    return Poly(std::move(c));
  }

  bool done() const { return pos_ == in_.size(); }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

inline std::string ToHex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

inline std::string FromHex(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
  };
  std::string out(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
  return out;
}

inline std::uint64_t Fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ffinfra
