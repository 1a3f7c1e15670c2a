// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hints/date.hpp"
#include "hints/digest.hpp"
#include "hints/errors.hpp"

namespace hints {

// Deterministic tag-length-value encoding. Everything that gets signed,
// hashed, journaled, or written to a certificate/proof file goes through
// this: fields in fixed declared order, each as one tag byte, a 4-byte
// big-endian unsigned length, then the value bytes. Identical values encode
// identically; there is no map or float type, so no ordering ambiguity.
class Encoder {
 public:
  Encoder& raw(uint8_t tag, ByteView value) {
    out_.push_back(tag);
    uint32_t n = static_cast<uint32_t>(value.size());
    if (value.size() != n) fail(Errc::bad_request, "field too long to encode");
    out_.push_back(static_cast<uint8_t>(n >> 24));
    out_.push_back(static_cast<uint8_t>(n >> 16));
    out_.push_back(static_cast<uint8_t>(n >> 8));
    out_.push_back(static_cast<uint8_t>(n));
    out_.insert(out_.end(), value.begin(), value.end());
    return *this;
  }

  Encoder& str(uint8_t tag, std::string_view s) { return raw(tag, as_bytes(s)); }

  Encoder& u64(uint8_t tag, uint64_t v) {
    std::array<uint8_t, 8> b;
    for (int i = 7; i >= 0; --i) {
      b[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
      v >>= 8;
    }
    return raw(tag, b);
  }

  Encoder& date(uint8_t tag, Date d) {
    return u64(tag, static_cast<uint64_t>(
                        static_cast<int64_t>(d.days_since_epoch()) + (1LL << 32)));
  }

  Encoder& digest(uint8_t tag, const Digest256& d) { return raw(tag, d.bytes); }

  Encoder& nested(uint8_t tag, const Bytes& inner) { return raw(tag, inner); }

  // Sorted key/value text map; key order (not insertion order) defines the
  // byte stream, so permuting an in-memory map cannot change the encoding.
  Encoder& kv(uint8_t tag, const std::map<std::string, std::string>& m) {
    Encoder inner;
    for (const auto& [k, v] : m) {
      inner.str(1, k);
      inner.str(2, v);
    }
    return nested(tag, inner.take());
  }

  Bytes take() { return std::move(out_); }
  const Bytes& bytes() const { return out_; }

 private:
  Bytes out_;
};

// Strict decoder: fields must appear in the exact order they were encoded.
// Any deviation (wrong tag, truncation, trailing bytes) is a BadRequest.
class Decoder {
 public:
  explicit Decoder(ByteView data) : data_(data) {}

  ByteView raw(uint8_t tag) {
    if (pos_ + 5 > data_.size()) fail(Errc::bad_request, "truncated field header");
    if (data_[pos_] != tag)
      fail(Errc::bad_request, "unexpected field tag " +
                                  std::to_string(int(data_[pos_])) + ", wanted " +
                                  std::to_string(int(tag)));
    uint32_t n = (uint32_t(data_[pos_ + 1]) << 24) |
                 (uint32_t(data_[pos_ + 2]) << 16) |
                 (uint32_t(data_[pos_ + 3]) << 8) | uint32_t(data_[pos_ + 4]);
    pos_ += 5;
    if (pos_ + n > data_.size()) fail(Errc::bad_request, "truncated field value");
    ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

  std::string str(uint8_t tag) {
    ByteView v = raw(tag);
    return std::string(reinterpret_cast<const char*>(v.data()), v.size());
  }

  uint64_t u64(uint8_t tag) {
    ByteView v = raw(tag);
    if (v.size() != 8) fail(Errc::bad_request, "bad integer width");
    uint64_t out = 0;
    for (uint8_t b : v) out = (out << 8) | b;
    return out;
  }

  Date date(uint8_t tag) {
    // dates are stored biased by 2^32; enforce the window so every date
    // has exactly one decodable encoding
    uint64_t v = u64(tag);
    constexpr uint64_t kBias = 1ULL << 32;
    if (v < kBias - (1ULL << 31) || v > kBias + 0x7fffffffULL)
      fail(Errc::bad_request, "date out of range");
    return Date::from_days(static_cast<int32_t>(static_cast<int64_t>(v) -
                                                static_cast<int64_t>(kBias)));
  }

  Digest256 digest(uint8_t tag) {
    ByteView v = raw(tag);
    if (v.size() != 32) fail(Errc::bad_request, "bad digest width");
    Digest256 d;
    std::copy(v.begin(), v.end(), d.bytes.begin());
    return d;
  }

  Bytes bytes_field(uint8_t tag) {
    ByteView v = raw(tag);
    return Bytes(v.begin(), v.end());
  }

  Decoder nested(uint8_t tag) { return Decoder(raw(tag)); }

  std::map<std::string, std::string> kv(uint8_t tag) {
    Decoder inner = nested(tag);
    std::map<std::string, std::string> m;
    std::string prev;
    while (!inner.done()) {
      std::string k = inner.str(1);
      std::string v = inner.str(2);
      if (!m.empty() && k <= prev)
        fail(Errc::bad_request, "kv keys out of order");
      prev = k;
      m.emplace(std::move(k), std::move(v));
    }
    return m;
  }

  bool done() const { return pos_ == data_.size(); }
  uint8_t peek_tag() const {
    if (pos_ >= data_.size()) fail(Errc::bad_request, "peek past end");
    return data_[pos_];
  }
  void expect_done() const {
    if (!done()) fail(Errc::bad_request, "trailing bytes");
  }

 private:
  ByteView data_;
  size_t pos_ = 0;
};

}  // namespace hints
