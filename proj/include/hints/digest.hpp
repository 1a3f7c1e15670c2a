// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hints/errors.hpp"

namespace hints {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

// 256-bit collision-resistant digest (SHA-256). Used for key fingerprints,
// chain links, attester nodes, and journal line digests.
struct Digest256 {
  std::array<uint8_t, 32> bytes{};

  auto operator<=>(const Digest256&) const = default;

  bool is_zero() const {
    for (uint8_t b : bytes)
      if (b) return false;
    return true;
  }

  std::string hex() const {
    static const char* k = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (uint8_t b : bytes) {
      out.push_back(k[b >> 4]);
      out.push_back(k[b & 0xf]);
    }
    return out;
  }

  // Short fingerprint form for display: "AB34D9...".
  std::string display() const {
    static const char* k = "0123456789ABCDEF";
    std::string out;
    for (size_t i = 0; i < 3; ++i) {
      out.push_back(k[bytes[i] >> 4]);
      out.push_back(k[bytes[i] & 0xf]);
    }
    out += "...";
    return out;
  }

  static Digest256 from_hex(std::string_view hexstr) {
    if (hexstr.size() != 64) fail(Errc::bad_request, "digest hex must be 64 chars");
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      fail(Errc::bad_request, "bad hex digit");
    };
    Digest256 d;
    for (size_t i = 0; i < 32; ++i)
      d.bytes[i] = static_cast<uint8_t>((nib(hexstr[2 * i]) << 4) |
                                        nib(hexstr[2 * i + 1]));
    return d;
  }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      fail(Errc::io_error, "SHA-256 init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteView data) {
    if (EVP_DigestUpdate(ctx_, data.data(), data.size()) != 1)
      fail(Errc::io_error, "SHA-256 update failed");
    return *this;
  }
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Sha256& update(uint8_t b) { return update(ByteView{&b, 1}); }

  Digest256 finish() {
    Digest256 d;
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx_, d.bytes.data(), &len) != 1 || len != 32)
      fail(Errc::io_error, "SHA-256 final failed");
    return d;
  }

 private:
  EVP_MD_CTX* ctx_;
};

inline Digest256 sha256(ByteView data) { return Sha256().update(data).finish(); }
inline Digest256 sha256(std::string_view s) { return sha256(as_bytes(s)); }

// Random source. The system implementation draws from the OS CSPRNG; the
// seeded implementation gives simulations reproducible nonces so that
// replaying a scenario script yields byte-identical journals.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Bytes bytes(size_t n) {
    Bytes b(n);
    fill(b);
    return b;
  }
  uint64_t next_u64() {
    uint64_t v;
    std::array<uint8_t, 8> b{};
    fill(b);
    std::memcpy(&v, b.data(), 8);
    return v;
  }
};

class SystemRng final : public Rng {
 public:
  void fill(std::span<uint8_t> out) override {
    if (!out.empty() && RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
      fail(Errc::io_error, "system RNG failure");
  }
};

class SeededRng final : public Rng {
 public:
  explicit SeededRng(uint64_t seed) : gen_(seed) {}
  void fill(std::span<uint8_t> out) override {
    for (auto& b : out) b = static_cast<uint8_t>(gen_());
  }

 private:
  std::mt19937_64 gen_;
};

inline std::string hex(ByteView data) {
  static const char* k = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(k[b >> 4]);
    out.push_back(k[b & 0xf]);
  }
  return out;
}

inline Bytes from_hex(std::string_view s) {
  if (s.size() % 2) fail(Errc::bad_request, "odd hex length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(Errc::bad_request, "bad hex digit");
  };
  Bytes out(s.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((nib(s[2 * i]) << 4) | nib(s[2 * i + 1]));
  return out;
}

inline std::string base64_encode(ByteView data) {
  static const char* k =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(k[(v >> 18) & 63]);
    out.push_back(k[(v >> 12) & 63]);
    out.push_back(k[(v >> 6) & 63]);
    out.push_back(k[v & 63]);
  }
  if (i + 1 == data.size()) {
    uint32_t v = data[i] << 16;
    out.push_back(k[(v >> 18) & 63]);
    out.push_back(k[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(k[(v >> 18) & 63]);
    out.push_back(k[(v >> 12) & 63]);
    out.push_back(k[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline Bytes base64_decode(std::string_view s) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (s.size() % 4) fail(Errc::bad_request, "bad base64 length");
  Bytes out;
  out.reserve(s.size() / 4 * 3);
  for (size_t i = 0; i < s.size(); i += 4) {
    int pad = 0;
    uint32_t v = 0;
    for (size_t j = 0; j < 4; ++j) {
      char c = s[i + j];
      if (c == '=') {
        if (i + 4 != s.size() || j < 2) fail(Errc::bad_request, "bad base64 padding");
        ++pad;
        v <<= 6;
      } else {
        if (pad) fail(Errc::bad_request, "base64 data after padding");
        int x = val(c);
        if (x < 0) fail(Errc::bad_request, "bad base64 character");
        v = (v << 6) | static_cast<uint32_t>(x);
      }
    }
    out.push_back(static_cast<uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

}  // namespace hints
