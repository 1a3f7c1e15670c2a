// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hints/canonical.hpp"
#include "hints/histname.hpp"
#include "hints/keyarchive.hpp"
#include "hints/signature.hpp"

namespace hints {

// The five signed statement kinds of the reduced-trust design. Persons
// appear only as keys; the fields follow the certificate layouts exactly
// and the signatures cover the canonical encoding of all prior fields.

enum class CertKind : uint8_t {
  identity = 1,
  revocation = 2,
  link = 3,
  severance = 4,
  delegation = 5,
};

inline std::string_view to_string(CertKind k) {
  switch (k) {
    case CertKind::identity: return "identity";
    case CertKind::revocation: return "revocation";
    case CertKind::link: return "link";
    case CertKind::severance: return "severance";
    case CertKind::delegation: return "delegation";
  }
  return "unknown";
}

inline CertKind cert_kind_from_string(std::string_view s) {
  if (s == "identity") return CertKind::identity;
  if (s == "revocation") return CertKind::revocation;
  if (s == "link") return CertKind::link;
  if (s == "severance") return CertKind::severance;
  if (s == "delegation") return CertKind::delegation;
  fail(Errc::bad_request, "unknown certificate kind: " + std::string(s));
}

// Freshness nonce: issuance date followed by 128 random bits.
inline Bytes fresh_nonce(Date issued, Rng& rng) {
  Encoder e;
  e.date(1, issued);
  Bytes b = e.take();
  Bytes r = rng.bytes(16);
  b.insert(b.end(), r.begin(), r.end());
  return b;
}

// Issued by a name-space provider: links `subject@issuer` to a public key
// for [start, end].
struct IdentityCertificate {
  std::string issuer;   // namespace
  std::string subject;  // local part
  KeyId key;
  Date start;
  Date end;
  Bytes nonce;
  Bytes signature;  // by the issuer's provider key

  PrimaryName name() const { return PrimaryName(subject, issuer); }

  Bytes signed_payload() const {
    Encoder e;
    e.str(1, "identity").str(2, issuer).str(3, subject).digest(4, key.fingerprint);
    e.date(5, start).date(6, end).raw(7, nonce);
    return e.take();
  }
  Bytes encode() const {
    Encoder e;
    e.nested(1, signed_payload()).raw(8, signature);
    return e.take();
  }
  static IdentityCertificate decode(ByteView data) {
    Decoder d(data);
    Decoder p = d.nested(1);
    IdentityCertificate c;
    if (p.str(1) != "identity") fail(Errc::bad_request, "not an identity certificate");
    c.issuer = p.str(2);
    c.subject = p.str(3);
    c.key = KeyId{p.digest(4)};
    c.start = p.date(5);
    c.end = p.date(6);
    c.nonce = p.bytes_field(7);
    p.expect_done();
    c.signature = d.bytes_field(8);
    d.expect_done();
    if (c.end < c.start) fail(Errc::bad_date, "identity window inverted");
    return c;
  }
};

// Issued by a name-space provider: breaks the (subject, key) binding from
// `start` onward.
struct RevocationCertificate {
  std::string issuer;
  std::string subject;
  KeyId key;
  Date start;
  Bytes nonce;
  Bytes signature;

  PrimaryName name() const { return PrimaryName(subject, issuer); }

  Bytes signed_payload() const {
    Encoder e;
    e.str(1, "revocation").str(2, issuer).str(3, subject).digest(4, key.fingerprint);
    e.date(5, start).raw(7, nonce);
    return e.take();
  }
  Bytes encode() const {
    Encoder e;
    e.nested(1, signed_payload()).raw(8, signature);
    return e.take();
  }
  static RevocationCertificate decode(ByteView data) {
    Decoder d(data);
    Decoder p = d.nested(1);
    RevocationCertificate c;
    if (p.str(1) != "revocation") fail(Errc::bad_request, "not a revocation certificate");
    c.issuer = p.str(2);
    c.subject = p.str(3);
    c.key = KeyId{p.digest(4)};
    c.start = p.date(5);
    c.nonce = p.bytes_field(7);
    p.expect_done();
    c.signature = d.bytes_field(8);
    d.expect_done();
    return c;
  }
};

// Dual-signed association of a name with a person key for [start, end]:
// signature 1 by the name's current key (provider-assigned), signature 2 by
// the person key. The two signatures carry the two facts an association
// needs — control of the name and the person's declared intent.
struct LinkCertificate {
  PrimaryName name;
  KeyId person_key;
  Date start;
  Date end;
  Bytes nonce;
  Bytes signature_name;    // by the current key of the name
  Bytes signature_person;  // by the person key

  Bytes signed_payload() const {
    Encoder e;
    e.str(1, "link").str(2, name.to_string()).digest(3, person_key.fingerprint);
    e.date(4, start).date(5, end).raw(6, nonce);
    return e.take();
  }
  Bytes encode() const {
    Encoder e;
    e.nested(1, signed_payload()).raw(8, signature_name).raw(9, signature_person);
    return e.take();
  }
  static LinkCertificate decode(ByteView data) {
    Decoder d(data);
    Decoder p = d.nested(1);
    LinkCertificate c;
    if (p.str(1) != "link") fail(Errc::bad_request, "not a link certificate");
    c.name = PrimaryName::parse(p.str(2));
    c.person_key = KeyId{p.digest(3)};
    c.start = p.date(4);
    c.end = p.date(5);
    c.nonce = p.bytes_field(6);
    p.expect_done();
    c.signature_name = d.bytes_field(8);
    c.signature_person = d.bytes_field(9);
    d.expect_done();
    if (c.end < c.start) fail(Errc::bad_date, "link window inverted");
    return c;
  }
};

// Person-signed statement breaking the link between a name and the person
// key at `time`. No counter-signature: the name may no longer be under the
// person's control.
struct SeveranceCertificate {
  PrimaryName name;
  KeyId person_key;
  Date time;
  Bytes nonce;
  Bytes signature;  // by the person key

  Bytes signed_payload() const {
    Encoder e;
    e.str(1, "severance").str(2, name.to_string()).digest(3, person_key.fingerprint);
    e.date(4, time).raw(6, nonce);
    return e.take();
  }
  Bytes encode() const {
    Encoder e;
    e.nested(1, signed_payload()).raw(8, signature);
    return e.take();
  }
  static SeveranceCertificate decode(ByteView data) {
    Decoder d(data);
    Decoder p = d.nested(1);
    SeveranceCertificate c;
    if (p.str(1) != "severance") fail(Errc::bad_request, "not a severance certificate");
    c.name = PrimaryName::parse(p.str(2));
    c.person_key = KeyId{p.digest(3)};
    c.time = p.date(4);
    c.nonce = p.bytes_field(6);
    p.expect_done();
    c.signature = d.bytes_field(8);
    d.expect_done();
    return c;
  }
};

// Continues a person's key trail from an older key to a newer one. Stored
// with two signatures; both must verify.
struct DelegationCertificate {
  KeyId issuer;
  KeyId delegate;
  Date time;
  Bytes nonce;
  Bytes signature_issuer;
  Bytes signature_delegate;

  Bytes signed_payload() const {
    Encoder e;
    e.str(1, "delegation").digest(2, issuer.fingerprint).digest(3, delegate.fingerprint);
    e.date(4, time).raw(6, nonce);
    return e.take();
  }
  Bytes encode() const {
    Encoder e;
    e.nested(1, signed_payload()).raw(8, signature_issuer).raw(9, signature_delegate);
    return e.take();
  }
  static DelegationCertificate decode(ByteView data) {
    Decoder d(data);
    Decoder p = d.nested(1);
    DelegationCertificate c;
    if (p.str(1) != "delegation") fail(Errc::bad_request, "not a delegation certificate");
    c.issuer = KeyId{p.digest(2)};
    c.delegate = KeyId{p.digest(3)};
    c.time = p.date(4);
    c.nonce = p.bytes_field(6);
    p.expect_done();
    c.signature_issuer = d.bytes_field(8);
    c.signature_delegate = d.bytes_field(9);
    d.expect_done();
    if (c.issuer == c.delegate) fail(Errc::bad_request, "self-delegation");
    return c;
  }
};

using Certificate =
    std::variant<IdentityCertificate, RevocationCertificate, LinkCertificate,
                 SeveranceCertificate, DelegationCertificate>;

inline CertKind kind_of(const Certificate& c) {
  return static_cast<CertKind>(c.index() + 1);
}

inline Bytes encode_certificate(const Certificate& c) {
  return std::visit([](const auto& cc) { return cc.encode(); }, c);
}

inline Bytes certificate_nonce(const Certificate& c) {
  return std::visit([](const auto& cc) { return cc.nonce; }, c);
}

// The date a certificate claims to speak from: start for identity,
// revocation and link, time for severance and delegation. Signature
// validity is judged at this date.
inline Date stated_date(const Certificate& c) {
  return std::visit(
      [](const auto& cc) -> Date {
        using T = std::decay_t<decltype(cc)>;
        if constexpr (std::is_same_v<T, SeveranceCertificate> ||
                      std::is_same_v<T, DelegationCertificate>)
          return cc.time;
        else
          return cc.start;
      },
      c);
}

inline Certificate decode_certificate(ByteView data) {
  // The payload's first field names the kind; peek by trial decode of the
  // nested header.
  Decoder d(data);
  Decoder p = d.nested(1);
  std::string kind = p.str(1);
  if (kind == "identity") return IdentityCertificate::decode(data);
  if (kind == "revocation") return RevocationCertificate::decode(data);
  if (kind == "link") return LinkCertificate::decode(data);
  if (kind == "severance") return SeveranceCertificate::decode(data);
  if (kind == "delegation") return DelegationCertificate::decode(data);
  fail(Errc::bad_request, "unknown certificate kind: " + kind);
}

// --- issuance -------------------------------------------------------------

inline IdentityCertificate issue_identity(const SignatureScheme& scheme,
                                          std::string_view issuer_ns,
                                          std::string_view subject,
                                          const KeyId& subject_key, Date start,
                                          Date end, const KeyPair& issuer_key,
                                          Date issued_on, Rng& rng) {
  IdentityCertificate c;
  c.issuer = std::string(issuer_ns);
  c.subject = std::string(subject);
  c.key = subject_key;
  c.start = start;
  c.end = end;
  c.nonce = fresh_nonce(issued_on, rng);
  c.signature = scheme.sign(issuer_key.priv, c.signed_payload());
  return c;
}

inline RevocationCertificate issue_revocation(const SignatureScheme& scheme,
                                              std::string_view issuer_ns,
                                              std::string_view subject,
                                              const KeyId& subject_key,
                                              Date start, const KeyPair& issuer_key,
                                              Date issued_on, Rng& rng) {
  RevocationCertificate c;
  c.issuer = std::string(issuer_ns);
  c.subject = std::string(subject);
  c.key = subject_key;
  c.start = start;
  c.nonce = fresh_nonce(issued_on, rng);
  c.signature = scheme.sign(issuer_key.priv, c.signed_payload());
  return c;
}

inline LinkCertificate issue_link(const SignatureScheme& scheme,
                                  const PrimaryName& name,
                                  const KeyPair& name_key,
                                  const KeyPair& person_key, Date start, Date end,
                                  Date issued_on, Rng& rng) {
  LinkCertificate c;
  c.name = name;
  c.person_key = scheme.key_id(person_key.pub);
  c.start = start;
  c.end = end;
  c.nonce = fresh_nonce(issued_on, rng);
  Bytes payload = c.signed_payload();
  c.signature_name = scheme.sign(name_key.priv, payload);
  c.signature_person = scheme.sign(person_key.priv, payload);
  return c;
}

inline SeveranceCertificate issue_severance(const SignatureScheme& scheme,
                                            const PrimaryName& name,
                                            const KeyPair& person_key, Date time,
                                            Date issued_on, Rng& rng) {
  SeveranceCertificate c;
  c.name = name;
  c.person_key = scheme.key_id(person_key.pub);
  c.time = time;
  c.nonce = fresh_nonce(issued_on, rng);
  c.signature = scheme.sign(person_key.priv, c.signed_payload());
  return c;
}

inline DelegationCertificate issue_delegation(const SignatureScheme& scheme,
                                              const KeyPair& issuer,
                                              const KeyPair& delegate, Date time,
                                              Date issued_on, Rng& rng) {
  DelegationCertificate c;
  c.issuer = scheme.key_id(issuer.pub);
  c.delegate = scheme.key_id(delegate.pub);
  if (c.issuer == c.delegate) fail(Errc::bad_request, "self-delegation");
  c.time = time;
  c.nonce = fresh_nonce(issued_on, rng);
  Bytes payload = c.signed_payload();
  c.signature_issuer = scheme.sign(issuer.priv, payload);
  c.signature_delegate = scheme.sign(delegate.priv, payload);
  return c;
}

// --- verification ----------------------------------------------------------

struct CertVerdict {
  bool valid = false;
  std::string reason;  // empty when valid

  static CertVerdict ok() { return {true, ""}; }
  static CertVerdict invalid(std::string r) { return {false, std::move(r)}; }
};

namespace detail {

// Look up the key for `owner` valid at `at`. Missing owner entirely is
// SignerUnknown; known owner with no window covering the date is the
// "key-expired-at-issuance" verdict.
inline const KeyArchiveEntry* archive_signer(const KeyArchive& archive,
                                             const std::string& owner, Date at,
                                             CertVerdict& verdict_out) {
  if (const KeyArchiveEntry* e = archive.by_owner_at(owner, at)) return e;
  if (!archive.knows_owner(owner)) fail(Errc::signer_unknown, owner);
  verdict_out = CertVerdict::invalid("key-expired-at-issuance");
  return nullptr;
}

inline CertVerdict check_one(const SignatureScheme& scheme,
                             const KeyArchive& archive, const std::string& owner,
                             Date at, ByteView payload, ByteView sig) {
  CertVerdict v = CertVerdict::ok();
  const KeyArchiveEntry* e = archive_signer(archive, owner, at, v);
  if (!e) return v;
  if (!scheme.verify(e->key, payload, sig))
    return CertVerdict::invalid("signature");
  return CertVerdict::ok();
}

// Person-key signer: the key is named by fingerprint, so the archive entry
// must both exist and cover the claimed date.
inline CertVerdict check_keyed(const SignatureScheme& scheme,
                               const KeyArchive& archive, const KeyId& key,
                               Date at, ByteView payload, ByteView sig) {
  const KeyArchiveEntry* e = archive.by_key(key);
  if (!e) fail(Errc::signer_unknown, key.hex());
  if (!e->covers(at)) return CertVerdict::invalid("key-expired-at-issuance");
  if (!scheme.verify(e->key, payload, sig))
    return CertVerdict::invalid("signature");
  return CertVerdict::ok();
}

}  // namespace detail

// Verify a certificate as of a claimed issuance date: every required
// signature must check under the signer's key that was valid on that date.
// Link certificates need the expected name key (established by the covering
// identity certificate); callers that track identity state pass it in.
inline CertVerdict verify_at(const Certificate& cert, Date claimed_issuance,
                             const KeyArchive& archive,
                             const SignatureScheme& scheme,
                             std::optional<KeyId> link_name_key = std::nullopt) {
  return std::visit(
      [&](const auto& c) -> CertVerdict {
        using T = std::decay_t<decltype(c)>;
        Bytes payload = c.signed_payload();
        if constexpr (std::is_same_v<T, IdentityCertificate> ||
                      std::is_same_v<T, RevocationCertificate>) {
          return detail::check_one(scheme, archive, c.issuer, claimed_issuance,
                                   payload, c.signature);
        } else if constexpr (std::is_same_v<T, LinkCertificate>) {
          if (!link_name_key)
            fail(Errc::missing_key, "link verification needs the name's key");
          CertVerdict v =
              detail::check_keyed(scheme, archive, *link_name_key,
                                  claimed_issuance, payload, c.signature_name);
          if (!v.valid) return v;
          return detail::check_keyed(scheme, archive, c.person_key,
                                     claimed_issuance, payload,
                                     c.signature_person);
        } else if constexpr (std::is_same_v<T, SeveranceCertificate>) {
          return detail::check_keyed(scheme, archive, c.person_key,
                                     claimed_issuance, payload, c.signature);
        } else {
          CertVerdict v = detail::check_keyed(scheme, archive, c.issuer,
                                              claimed_issuance, payload,
                                              c.signature_issuer);
          if (!v.valid) return v;
          return detail::check_keyed(scheme, archive, c.delegate,
                                     claimed_issuance, payload,
                                     c.signature_delegate);
        }
      },
      cert);
}

// Follow a person's key trail from `start_key` through the delegations
// dated at or before `at`. Each hop must fall inside the issuing key's
// archive validity window (a delegation has to happen before the previous
// key is abandoned). Exactly one outgoing delegation per key is tolerated.
inline KeyId walk_delegations(const KeyId& start_key,
                              const std::vector<DelegationCertificate>& certs,
                              Date at, const KeyArchive& archive) {
  KeyId current = start_key;
  std::set<Digest256> visited{current.fingerprint};
  for (;;) {
    const DelegationCertificate* next = nullptr;
    for (const auto& c : certs) {
      if (c.issuer != current || c.time > at) continue;
      if (next && next->delegate != c.delegate)
        fail(Errc::forked_chain, "two delegations from " + current.display());
      next = &c;
    }
    if (!next) return current;
    const KeyArchiveEntry* issuer_entry = archive.by_key(current);
    if (!issuer_entry) fail(Errc::signer_unknown, current.hex());
    if (!issuer_entry->covers(next->time))
      fail(Errc::broken_chain,
           "delegation dated " + next->time.to_string() +
               " outside issuer key validity ending " +
               issuer_entry->valid_to.to_string());
    if (!visited.insert(next->delegate.fingerprint).second)
      fail(Errc::forked_chain, "delegation cycle at " + next->delegate.display());
    current = next->delegate;
  }
}

// --- certificate files ------------------------------------------------------

// "HINTS-CERT v1 <kind>" header line, then the canonical bytes in base64.
inline void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << "HINTS-CERT v1 " << to_string(kind_of(cert)) << "\n"
      << base64_encode(encode_certificate(cert)) << "\n";
}

inline Certificate load_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot read " + path);
  std::string header, body;
  std::getline(in, header);
  std::getline(in, body);
  if (header.rfind("HINTS-CERT v1 ", 0) != 0)
    fail(Errc::bad_request, "not a certificate file: " + path);
  CertKind declared = cert_kind_from_string(header.substr(14));
  Certificate cert = decode_certificate(base64_decode(body));
  if (kind_of(cert) != declared)
    fail(Errc::bad_request, "certificate kind does not match header");
  return cert;
}

}  // namespace hints
