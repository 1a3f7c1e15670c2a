// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <openssl/evp.h>

#include <memory>
#include <string>
#include <string_view>

#include "hints/canonical.hpp"
#include "hints/digest.hpp"
#include "hints/errors.hpp"

namespace hints {

struct PublicKey {
  Bytes bytes;
  auto operator<=>(const PublicKey&) const = default;
};

struct PrivateKey {
  Bytes bytes;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

// Fingerprint of a public key: digest of its canonical encoding
// (scheme name + raw key bytes). Persons and provider keys are referred to
// by KeyId everywhere; no human names appear in certificates.
struct KeyId {
  Digest256 fingerprint;

  auto operator<=>(const KeyId&) const = default;
  std::string hex() const { return fingerprint.hex(); }
  std::string display() const { return fingerprint.display(); }
  bool is_zero() const { return fingerprint.is_zero(); }
};

// Abstract signature scheme. Certificates never embed a scheme identifier;
// a deployment picks one scheme and the key archive carries the matching
// public keys.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual std::string_view name() const = 0;
  virtual KeyPair generate(Rng& rng) const = 0;
  virtual Bytes sign(const PrivateKey& key, ByteView message) const = 0;
  virtual bool verify(const PublicKey& key, ByteView message,
                      ByteView signature) const = 0;

  Bytes encode_public(const PublicKey& key) const {
    Encoder e;
    e.str(1, name());
    e.raw(2, key.bytes);
    return e.take();
  }

  KeyId key_id(const PublicKey& key) const {
    return KeyId{sha256(encode_public(key))};
  }
};

// Ed25519 backed by OpenSSL. Signatures are deterministic, which keeps
// journal bytes reproducible for a fixed key.
class Ed25519Scheme final : public SignatureScheme {
 public:
  std::string_view name() const override { return "ed25519"; }

  KeyPair generate(Rng& rng) const override {
    // Derive the 32-byte seed from the caller's RNG so seeded worlds stay
    // deterministic end to end.
    Bytes seed = rng.bytes(32);
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(
        EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
    if (!pkey) fail(Errc::io_error, "ed25519 keygen failed");
    KeyPair kp;
    kp.priv.bytes = seed;
    size_t publen = 32;
    kp.pub.bytes.resize(publen);
    if (EVP_PKEY_get_raw_public_key(pkey, kp.pub.bytes.data(), &publen) != 1) {
      EVP_PKEY_free(pkey);
      fail(Errc::io_error, "ed25519 public key extraction failed");
    }
    EVP_PKEY_free(pkey);
    return kp;
  }

  Bytes sign(const PrivateKey& key, ByteView message) const override {
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(
        EVP_PKEY_ED25519, nullptr, key.bytes.data(), key.bytes.size());
    if (!pkey) fail(Errc::missing_key, "bad ed25519 private key");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    Bytes sig(64);
    size_t siglen = sig.size();
    bool ok = ctx &&
              EVP_DigestSignInit(ctx, nullptr, nullptr, nullptr, pkey) == 1 &&
              EVP_DigestSign(ctx, sig.data(), &siglen, message.data(),
                             message.size()) == 1;
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    if (!ok) fail(Errc::io_error, "ed25519 signing failed");
    sig.resize(siglen);
    return sig;
  }

  bool verify(const PublicKey& key, ByteView message,
              ByteView signature) const override {
    if (key.bytes.size() != 32) return false;
    EVP_PKEY* pkey = EVP_PKEY_new_raw_public_key(
        EVP_PKEY_ED25519, nullptr, key.bytes.data(), key.bytes.size());
    if (!pkey) return false;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    bool ok = ctx &&
              EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey) == 1 &&
              EVP_DigestVerify(ctx, signature.data(), signature.size(),
                               message.data(), message.size()) == 1;
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    return ok;
  }
};

// Deterministic stand-in for tests and simulations: fast, reproducible,
// and trivially forgeable (the "signature" is a keyed digest that anyone
// can recompute from the public key). Never use outside test fixtures.
class TestScheme final : public SignatureScheme {
 public:
  std::string_view name() const override { return "test-keyed-digest"; }

  KeyPair generate(Rng& rng) const override {
    KeyPair kp;
    kp.priv.bytes = rng.bytes(32);
    kp.pub.bytes = derive_pub(kp.priv.bytes);
    return kp;
  }

  Bytes sign(const PrivateKey& key, ByteView message) const override {
    return tag(derive_pub(key.bytes), message);
  }

  bool verify(const PublicKey& key, ByteView message,
              ByteView signature) const override {
    Bytes expect = tag(key.bytes, message);
    return signature.size() == expect.size() &&
           std::equal(signature.begin(), signature.end(), expect.begin());
  }

 private:
  static Bytes derive_pub(ByteView priv) {
    Digest256 d = Sha256().update("test-pub").update(priv).finish();
    return Bytes(d.bytes.begin(), d.bytes.end());
  }
  static Bytes tag(ByteView pub, ByteView message) {
    Digest256 d = Sha256().update("test-sig").update(pub).update(message).finish();
    return Bytes(d.bytes.begin(), d.bytes.end());
  }
};

}  // namespace hints
