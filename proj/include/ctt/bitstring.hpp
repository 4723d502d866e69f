// Copyright 2026 The ctt Authors.
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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctt/error.hpp"

namespace ctt {

// Fixed-length bit sequence packed into 64-bit words.
//
// Bit 0 is the first bit of the string and, when the string is read as a
// polynomial over GF(2), the constant coefficient. Bits beyond size() in the
// last word are always zero.
class BitString {
 public:
  static constexpr std::size_t kWordBits = 64;

  BitString() = default;
  explicit BitString(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  // Parses a string of '0'/'1' characters, first character is bit 0.
  static BitString from_string(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') {
        out.set(i, true);
      } else if (text[i] != '0') {
        throw ParseError("bit string may only contain '0' and '1'");
      }
    }
    return out;
  }

  static BitString from_uint(std::uint64_t value, std::size_t width) {
    if (width < 64 && (value >> width) != 0) {
      throw LengthError("value does not fit in the requested width");
    }
    BitString out(width);
    if (width > 0) out.words_[0] = value;
    return out;
  }

  static BitString from_words(std::span<const std::uint64_t> words, std::size_t size) {
    BitString out(size);
    const std::size_t n = std::min(words.size(), out.words_.size());
    std::copy_n(words.begin(), n, out.words_.begin());
    out.trim();
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  std::size_t weight() const {
    std::size_t w = 0;
    for (std::uint64_t word : words_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
  }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  BitString& operator^=(const BitString& other) {
    if (other.size_ != size_) throw LengthError("xor of bit strings with different lengths");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  friend BitString operator^(BitString lhs, const BitString& rhs) {
    lhs ^= rhs;
    return lhs;
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  // Bits [pos, pos + len).
  BitString slice(std::size_t pos, std::size_t len) const {
    if (pos > size_ || len > size_ - pos) throw LengthError("slice out of range");
    BitString out(len);
    const std::size_t shift = pos % kWordBits;
    const std::size_t base = pos / kWordBits;
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
      std::uint64_t lo = base + i < words_.size() ? words_[base + i] : 0;
      std::uint64_t hi = base + i + 1 < words_.size() ? words_[base + i + 1] : 0;
      out.words_[i] = shift == 0 ? lo : (lo >> shift) | (hi << (kWordBits - shift));
    }
    out.trim();
    return out;
  }

  BitString prefix(std::size_t len) const { return slice(0, len); }

  void append(const BitString& other) {
    const std::size_t old = size_;
    resize(size_ + other.size_);
    const std::size_t shift = old % kWordBits;
    const std::size_t base = old / kWordBits;
    for (std::size_t i = 0; i < other.words_.size(); ++i) {
      const std::uint64_t w = other.words_[i];
      words_[base + i] |= w << shift;
      if (shift != 0 && base + i + 1 < words_.size()) words_[base + i + 1] |= w >> (kWordBits - shift);
    }
  }

  void resize(std::size_t size) {
    size_ = size;
    words_.resize(word_count(size), 0);
    trim();
  }

  friend BitString concat(BitString lhs, const BitString& rhs) {
    lhs.append(rhs);
    return lhs;
  }

  std::uint64_t to_uint() const {
    if (size_ > 64) throw LengthError("bit string longer than 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  std::string to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (get(i)) out[i] = '1';
    }
    return out;
  }

  // Little-endian byte packing: bit 0 is the least significant bit of byte 0.
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t bytes = (size_ + 7) / 8;
    std::string out;
    out.reserve(2 * bytes);
    for (std::size_t b = 0; b < bytes; ++b) {
      const auto byte = static_cast<unsigned>((words_[b / 8] >> (8 * (b % 8))) & 0xffU);
      out.push_back(kDigits[byte >> 4]);
      out.push_back(kDigits[byte & 0xf]);
    }
    return out;
  }

  static BitString from_hex(std::string_view hex, std::size_t size) {
    if (hex.size() != 2 * ((size + 7) / 8)) throw ParseError("hex length does not match bit length");
    BitString out(size);
    for (std::size_t b = 0; b < hex.size() / 2; ++b) {
      const std::uint64_t byte = static_cast<std::uint64_t>(hex_digit(hex[2 * b]) * 16 + hex_digit(hex[2 * b + 1]));
      out.words_[b / 8] |= byte << (8 * (b % 8));
    }
    if (out.has_stray_bits()) throw ParseError("hex encodes bits beyond the declared length");
    return out;
  }

  // "<length>:<hex>", the canonical text form used in serialized artifacts.
  std::string serialize() const { return std::to_string(size_) + ":" + to_hex(); }

  static BitString deserialize(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected <length>:<hex>");
    std::size_t size = 0;
    for (char c : text.substr(0, colon)) {
      if (c < '0' || c > '9') throw ParseError("bad bit length");
      size = size * 10 + static_cast<std::size_t>(c - '0');
    }
    return from_hex(text.substr(colon + 1), size);
  }

 private:
  static std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

  static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError("bad hex digit");
  }

  void trim() {
    if (size_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % kWordBits)) - 1;
    }
  }

  bool has_stray_bits() const {
    if (size_ % kWordBits == 0 || words_.empty()) return false;
    return (words_.back() >> (size_ % kWordBits)) != 0;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ctt
