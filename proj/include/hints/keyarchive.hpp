// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hints/canonical.hpp"
#include "hints/date.hpp"
#include "hints/signature.hpp"

namespace hints {

// One archived public key with its validity window. `owner` is either a
// name-space provider's namespace string ("yahoo.com") or a per-key label
// for person keys ("key:<fingerprint hex>"). Validity intervals for one
// owner never overlap, so by_owner_at is unambiguous.
struct KeyArchiveEntry {
  std::string owner;
  PublicKey key;
  KeyId id;
  Date valid_from;
  Date valid_to;

  bool covers(Date d) const { return valid_from <= d && d <= valid_to; }
};

// Local stand-in for an external key archival service: a securely
// time-stamped table of the keys that providers and persons used during
// their lifetimes. Loaded from a bootstrap file signed by a configured
// authority key; verification trusts the archive contents from then on.
class KeyArchive {
 public:
  KeyArchive() = default;

  static std::string person_owner(const KeyId& id) { return "key:" + id.hex(); }

  void add(const SignatureScheme& scheme, std::string owner, PublicKey key,
           Date valid_from, Date valid_to) {
    if (valid_to < valid_from) fail(Errc::bad_date, "archive window inverted");
    for (const auto& e : entries_) {
      if (e.owner == owner && e.valid_from <= valid_to && valid_from <= e.valid_to)
        fail(Errc::bad_request, "overlapping archive windows for " + owner);
    }
    KeyId id = scheme.key_id(key);
    entries_.push_back(
        KeyArchiveEntry{std::move(owner), std::move(key), id, valid_from, valid_to});
  }

  void add_person_key(const SignatureScheme& scheme, const PublicKey& key,
                      Date valid_from, Date valid_to) {
    add(scheme, person_owner(scheme.key_id(key)), key, valid_from, valid_to);
  }

  const KeyArchiveEntry* by_owner_at(std::string_view owner, Date at) const {
    for (const auto& e : entries_)
      if (e.owner == owner && e.covers(at)) return &e;
    return nullptr;
  }

  bool knows_owner(std::string_view owner) const {
    for (const auto& e : entries_)
      if (e.owner == owner) return true;
    return false;
  }

  const KeyArchiveEntry* by_key(const KeyId& id) const {
    for (const auto& e : entries_)
      if (e.id == id) return &e;
    return nullptr;
  }

  const std::vector<KeyArchiveEntry>& entries() const { return entries_; }

  Bytes encode() const {
    Encoder e;
    for (const auto& entry : entries_) {
      Encoder inner;
      inner.str(1, entry.owner);
      inner.raw(2, entry.key.bytes);
      inner.date(3, entry.valid_from);
      inner.date(4, entry.valid_to);
      e.nested(10, inner.take());
    }
    return e.take();
  }

  static KeyArchive decode(const SignatureScheme& scheme, ByteView data) {
    KeyArchive a;
    Decoder d(data);
    while (!d.done()) {
      Decoder inner = d.nested(10);
      std::string owner = inner.str(1);
      PublicKey key{inner.bytes_field(2)};
      Date from = inner.date(3);
      Date to = inner.date(4);
      inner.expect_done();
      a.add(scheme, std::move(owner), std::move(key), from, to);
    }
    return a;
  }

  // Bootstrap file: "HINTS-KEYS v1", one base64 payload line, one base64
  // signature line (authority-signed over the payload bytes).
  void save(const std::string& path, const SignatureScheme& scheme,
            const KeyPair& authority) const {
    Bytes payload = encode();
    Bytes sig = scheme.sign(authority.priv, payload);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << "HINTS-KEYS v1\n"
        << base64_encode(payload) << "\n"
        << base64_encode(sig) << "\n";
  }

  static KeyArchive load(const std::string& path, const SignatureScheme& scheme,
                         const PublicKey& authority) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot read " + path);
    std::string header, payload64, sig64;
    std::getline(in, header);
    std::getline(in, payload64);
    std::getline(in, sig64);
    if (header != "HINTS-KEYS v1")
      fail(Errc::bad_request, "not a key archive file: " + path);
    Bytes payload = base64_decode(payload64);
    Bytes sig = base64_decode(sig64);
    if (!scheme.verify(authority, payload, sig))
      fail(Errc::bad_signature, "key archive bootstrap signature invalid");
    return decode(scheme, payload);
  }

 private:
  std::vector<KeyArchiveEntry> entries_;
};

}  // namespace hints
