// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hints/attester.hpp"
#include "hints/certs.hpp"
#include "hints/chain.hpp"
#include "hints/historian.hpp"
#include "hints/journal.hpp"

namespace hints {

// Reduced-trust historian: stores signed certificates instead of bare
// association records, chains every accepted certificate into a
// tamper-evident log with published anchors, mirrors both database indices
// as undeniable attesters, and answers resolutions with a proof set a
// correspondent can verify offline from public material alone.

// --- index keys -----------------------------------------------------------

// The historian's two sorted indices become attesters over canonical key
// encodings: [name, kind, date, seq] and [principal key, kind, date, seq].
// The seq ties each key to one chained certificate; the leading field
// groups a name's (or key's) whole record range into one contiguous key
// interval.
namespace certindex {

inline Date index_date(const Certificate& c) { return stated_date(c); }

inline KeyId principal_of(const Certificate& c) {
  return std::visit(
      [](const auto& cc) -> KeyId {
        using T = std::decay_t<decltype(cc)>;
        if constexpr (std::is_same_v<T, IdentityCertificate> ||
                      std::is_same_v<T, RevocationCertificate>)
          return cc.key;
        else if constexpr (std::is_same_v<T, LinkCertificate> ||
                           std::is_same_v<T, SeveranceCertificate>)
          return cc.person_key;
        else
          return cc.issuer;
      },
      c);
}

inline std::optional<PrimaryName> name_of(const Certificate& c) {
  return std::visit(
      [](const auto& cc) -> std::optional<PrimaryName> {
        using T = std::decay_t<decltype(cc)>;
        if constexpr (std::is_same_v<T, IdentityCertificate> ||
                      std::is_same_v<T, RevocationCertificate>)
          return cc.name();
        else if constexpr (std::is_same_v<T, LinkCertificate> ||
                           std::is_same_v<T, SeveranceCertificate>)
          return cc.name;
        else
          return std::nullopt;
      },
      c);
}

inline Bytes name_key(const PrimaryName& n, CertKind kind, Date when, uint64_t seq) {
  Encoder e;
  e.str(1, n.to_string());
  e.u64(2, static_cast<uint64_t>(kind));
  e.date(3, when);
  e.u64(4, seq);
  return e.take();
}

inline Bytes person_key(const KeyId& k, CertKind kind, Date when, uint64_t seq) {
  Encoder e;
  e.digest(1, k.fingerprint);
  e.u64(2, static_cast<uint64_t>(kind));
  e.date(3, when);
  e.u64(4, seq);
  return e.take();
}

struct DecodedKey {
  CertKind kind;
  Date when;
  uint64_t seq;
};

// Shared tail of both key layouts (kind, date, seq).
inline DecodedKey decode_tail(Decoder& d) {
  DecodedKey out;
  out.kind = static_cast<CertKind>(d.u64(2));
  out.when = d.date(3);
  out.seq = d.u64(4);
  d.expect_done();
  return out;
}

inline std::pair<Bytes, Bytes> name_bounds(const PrimaryName& n) {
  Encoder e;
  e.str(1, n.to_string());
  Bytes lo = e.take();
  Bytes hi = lo;
  hi.push_back(0xff);
  return {lo, hi};
}

inline std::pair<Bytes, Bytes> person_bounds(const KeyId& k) {
  Encoder e;
  e.digest(1, k.fingerprint);
  Bytes lo = e.take();
  Bytes hi = lo;
  hi.push_back(0xff);
  return {lo, hi};
}

}  // namespace certindex

// --- derived associations ----------------------------------------------------

struct CertRecord {
  Certificate cert;
  uint64_t seq = 0;
};

// One association interval a name's certificate set supports: the overlap
// of an identity assignment and a link declaration, truncated by any
// severance. `closed_on` records a severance that ended the association
// deliberately (which also ends its claim to be current).
struct CertifiedAssociation {
  DateInterval span;
  KeyId person;
  uint64_t link_seq = 0;
  std::optional<Date> closed_on;
};

// Pure interval arithmetic over one name's complete certificate set.
// Assignment validity comes from identity certificates truncated by
// revocations of the same key; linking validity from link certificates
// truncated by severances of the same person key. A revocation starting at
// R ends the assignment on R-1; a severance at t keeps t as the last
// linked day, mirroring the plain historian's record arithmetic.
inline std::vector<CertifiedAssociation> derive_associations(
    const std::vector<CertRecord>& name_certs) {
  struct IdentitySpan {
    KeyId key;
    DateInterval span;
    uint64_t seq;
  };
  std::vector<IdentitySpan> assignments;
  for (const CertRecord& cr : name_certs) {
    if (const auto* id = std::get_if<IdentityCertificate>(&cr.cert)) {
      Date end = id->end;
      bool dead = false;
      for (const CertRecord& cr2 : name_certs) {
        if (const auto* rev = std::get_if<RevocationCertificate>(&cr2.cert)) {
          if (!(rev->key == id->key)) continue;
          if (rev->start <= id->start) dead = true;
          else if (rev->start <= end) end = rev->start.plus_days(-1);
        }
      }
      if (!dead && id->start <= end)
        assignments.push_back(IdentitySpan{id->key, DateInterval{id->start, end}, cr.seq});
    }
  }

  std::vector<CertifiedAssociation> out;
  for (const CertRecord& cr : name_certs) {
    const auto* link = std::get_if<LinkCertificate>(&cr.cert);
    if (!link) continue;
    Date link_end = link->end;
    std::optional<Date> closed_on;
    for (const CertRecord& cr2 : name_certs) {
      if (const auto* sev = std::get_if<SeveranceCertificate>(&cr2.cert)) {
        if (!(sev->person_key == link->person_key)) continue;
        if (sev->time < link->start || sev->time > link->end) continue;
        if (sev->time <= link_end) {
          link_end = sev->time;
          closed_on = closed_on ? std::min(*closed_on, sev->time) : sev->time;
        }
      }
    }
    if (link_end < link->start) continue;
    // The assignment this link rides on: the identity key bound to the
    // name when the link started.
    for (const IdentitySpan& a : assignments) {
      if (!a.span.contains(link->start)) continue;
      auto overlap = a.span.intersect(DateInterval{link->start, link_end});
      if (!overlap) continue;
      out.push_back(CertifiedAssociation{*overlap, link->person_key, cr.seq, closed_on});
    }
  }
  return out;
}

// Identity keys assigned to a name on a given date: every identity
// certificate covering the date whose key is not revoked there. Usually
// one; a link certificate's name-side signature must verify under one of
// them.
inline std::vector<KeyId> assigned_keys_at(const std::vector<CertRecord>& name_certs,
                                           Date at) {
  std::vector<KeyId> out;
  for (const CertRecord& cr : name_certs) {
    const auto* id = std::get_if<IdentityCertificate>(&cr.cert);
    if (!id || !(id->start <= at && at <= id->end)) continue;
    bool revoked = false;
    for (const CertRecord& cr2 : name_certs) {
      const auto* rev = std::get_if<RevocationCertificate>(&cr2.cert);
      if (rev && rev->key == id->key && rev->start <= at) revoked = true;
    }
    if (revoked) continue;
    if (std::find(out.begin(), out.end(), id->key) == out.end())
      out.push_back(id->key);
  }
  return out;
}

// Attribution of one day, mirroring the plain historian: the association
// with the greatest start covering t, ties to the lowest chain seq.
inline const CertifiedAssociation* association_for_day(
    const std::vector<CertifiedAssociation>& assocs, Date t) {
  const CertifiedAssociation* best = nullptr;
  for (const CertifiedAssociation& a : assocs) {
    if (!a.span.contains(t)) continue;
    if (!best || a.span.first > best->span.first ||
        (a.span.first == best->span.first && a.link_seq < best->link_seq))
      best = &a;
  }
  return best;
}

inline bool association_current(const CertifiedAssociation& a, Date now) {
  if (!a.span.contains(now)) return false;
  return !(a.closed_on && *a.closed_on <= now);
}

// --- the proof bundle -----------------------------------------------------

struct Commitments {
  AttesterCommitment name_index;
  AttesterCommitment person_index;

  bool operator==(const Commitments&) const = default;

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << "HINTS-COMMIT v1\n"
        << "name " << name_index.root.hex() << " " << name_index.count << "\n"
        << "person " << person_index.root.hex() << " " << person_index.count << "\n";
  }
  static Commitments load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot read " + path);
    std::string header;
    std::getline(in, header);
    if (header != "HINTS-COMMIT v1")
      fail(Errc::bad_request, "not a commitments file: " + path);
    Commitments c;
    for (auto* target : {&c.name_index, &c.person_index}) {
      std::string tag, root;
      uint64_t count = 0;
      if (!(in >> tag >> root >> count))
        fail(Errc::bad_request, "truncated commitments file");
      target->root = Digest256::from_hex(root);
      target->count = count;
    }
    return c;
  }
};

// A certificate cited by a proof, pinned to its chain position by the
// payload digests between two published anchors.
struct ProofCert {
  uint64_t seq = 0;
  Bytes bytes;
  ChainSegment segment;

  Bytes encode() const {
    Encoder e;
    e.u64(1, seq).raw(2, bytes).nested(3, segment.encode());
    return e.take();
  }
  static ProofCert decode(Decoder& d) {
    ProofCert p;
    p.seq = d.u64(1);
    p.bytes = d.bytes_field(2);
    Decoder seg = d.nested(3);
    p.segment = ChainSegment::decode(seg);
    seg.expect_done();
    return p;
  }
};

struct NamedRange {
  PrimaryName name;
  RangeProof range;
};

struct KeyedRange {
  KeyId key;
  RangeProof range;
};

// Everything a correspondent needs to check one candidate person's answer:
// the complete certificate range for the historic name, the complete
// per-key ranges along the person's delegation trail, complete ranges for
// every name that trail ever linked, each cited certificate with its
// anchored chain position, and the answer itself.
struct ResolutionProof {
  uint32_t version = 1;
  HistoricName query;
  Date issued_on;

  enum class Answer : uint8_t { resolved = 1, not_found = 2 };
  Answer answer = Answer::not_found;
  std::optional<PrimaryName> current_name;
  KeyId lineage_root;  // zero when the name has no attributed holder

  std::vector<NamedRange> name_ranges;    // [0] is always the query name
  std::vector<KeyedRange> person_ranges;  // one per lineage key, walk order
  std::vector<ProofCert> certs;           // every cert cited by any range

  Bytes encode() const {
    Encoder e;
    e.u64(1, version);
    e.str(2, query.to_string());
    e.date(3, issued_on);
    e.u64(4, static_cast<uint64_t>(answer));
    e.str(5, current_name ? current_name->to_string() : "");
    e.digest(6, lineage_root.fingerprint);
    Encoder nr;
    for (const auto& r : name_ranges) {
      Encoder one;
      one.str(1, r.name.to_string());
      one.nested(2, r.range.encode());
      nr.nested(1, one.take());
    }
    e.nested(7, nr.take());
    Encoder pr;
    for (const auto& r : person_ranges) {
      Encoder one;
      one.digest(1, r.key.fingerprint);
      one.nested(2, r.range.encode());
      pr.nested(1, one.take());
    }
    e.nested(8, pr.take());
    Encoder cs;
    for (const auto& c : certs) cs.nested(1, c.encode());
    e.nested(9, cs.take());
    return e.take();
  }

  static ResolutionProof decode(ByteView data) {
    Decoder d(data);
    ResolutionProof p;
    p.version = static_cast<uint32_t>(d.u64(1));
    if (p.version != 1) fail(Errc::bad_request, "unknown proof version");
    p.query = parse_historic_name(d.str(2));
    p.issued_on = d.date(3);
    uint64_t answer = d.u64(4);
    if (answer != 1 && answer != 2) fail(Errc::bad_request, "bad answer kind");
    p.answer = static_cast<Answer>(answer);
    std::string cur = d.str(5);
    if (!cur.empty()) p.current_name = PrimaryName::parse(cur);
    p.lineage_root = KeyId{d.digest(6)};
    Decoder nr = d.nested(7);
    while (!nr.done()) {
      Decoder one = nr.nested(1);
      NamedRange r;
      r.name = PrimaryName::parse(one.str(1));
      Decoder rd = one.nested(2);
      r.range = RangeProof::decode(rd);
      rd.expect_done();
      one.expect_done();
      p.name_ranges.push_back(std::move(r));
    }
    Decoder pr = d.nested(8);
    while (!pr.done()) {
      Decoder one = pr.nested(1);
      KeyedRange r;
      r.key = KeyId{one.digest(1)};
      Decoder rd = one.nested(2);
      r.range = RangeProof::decode(rd);
      rd.expect_done();
      one.expect_done();
      p.person_ranges.push_back(std::move(r));
    }
    Decoder cs = d.nested(9);
    while (!cs.done()) {
      Decoder one = cs.nested(1);
      p.certs.push_back(ProofCert::decode(one));
      one.expect_done();
    }
    d.expect_done();
    return p;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << "HINTS-PROOF v1\n" << base64_encode(encode()) << "\n";
  }
  static ResolutionProof load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot read " + path);
    std::string header, body;
    std::getline(in, header);
    std::getline(in, body);
    if (header != "HINTS-PROOF v1")
      fail(Errc::bad_request, "not a proof file: " + path);
    return decode(base64_decode(body));
  }
};

struct CertifiedConfig {
  uint64_t anchor_period = 1024;
  // Ingest-time certificate verification. Turning it off simulates a
  // corrupt historian that archives statements it never checked; the
  // offline verifier has to catch those on its own.
  bool verify_on_ingest = true;
};

// --- the certified historian ---------------------------------------------

class CertifiedHistorian {
 public:
  CertifiedHistorian(const SignatureScheme& scheme, KeyArchive archive,
                     CertifiedConfig cfg, Journal* journal, AnchorLog* anchors)
      : scheme_(scheme),
        archive_(std::move(archive)),
        cfg_(cfg),
        journal_(journal),
        anchors_(anchors) {
    if (cfg_.anchor_period == 0) fail(Errc::bad_request, "anchor period must be positive");
    // Rebuild indices from an existing chain.
    for (const Bytes& payload : journal_->payloads()) index_certificate(payload);
    recommit();
  }

  const KeyArchive& archive() const { return archive_; }
  const Journal& journal() const { return *journal_; }
  const AnchorLog& anchors() const { return *anchors_; }

  Commitments commitments() const {
    std::shared_lock lock(mu_);
    return commitments_;
  }

  // --- ingestion -----------------------------------------------------------

  // Accept a certificate: verify it (unless simulating a corrupt
  // historian), reject nonce replays, chain it, and index it in both
  // attesters. Returns the chain position.
  uint64_t ingest(const Certificate& cert, Date now) {
    std::unique_lock lock(mu_);
    Bytes nonce = certificate_nonce(cert);
    if (nonces_seen_.count(nonce)) fail(Errc::stale_nonce, "replayed certificate nonce");
    if (cfg_.verify_on_ingest) check_incoming(cert);
    Bytes bytes = encode_certificate(cert);
    journal_->append(bytes);
    index_certificate(bytes);
    recommit();
    uint64_t seq = journal_->chain().head().seq;
    if ((seq + 1) % cfg_.anchor_period == 0) publish_anchor_locked(now);
    return seq;
  }

  uint64_t ingest_provider_certificate(const Certificate& cert, Date now) {
    CertKind k = kind_of(cert);
    if (k != CertKind::identity && k != CertKind::revocation)
      fail(Errc::bad_request, "expected an identity or revocation certificate");
    return ingest(cert, now);
  }

  uint64_t ingest_link_certificate(const Certificate& cert, Date now) {
    CertKind k = kind_of(cert);
    if (k != CertKind::link && k != CertKind::severance)
      fail(Errc::bad_request, "expected a link or severance certificate");
    return ingest(cert, now);
  }

  void publish_anchor(Date now) {
    std::unique_lock lock(mu_);
    publish_anchor_locked(now);
  }

  // --- resolution -------------------------------------------------------------

  // One self-contained proof bundle per candidate person; a single bundle
  // answering NotFound when the name has no attributed holder at all.
  std::vector<ResolutionProof> certified_resolve(const HistoricName& h, Date now) {
    std::unique_lock lock(mu_);
    // Proofs reference chain positions, so everything cited must sit below
    // a published anchor.
    if (!journal_->chain().empty() &&
        static_cast<int64_t>(journal_->chain().head().seq) > anchors_->last().seq)
      publish_anchor_locked(now);

    std::vector<ResolutionProof> bundles;
    std::vector<CertRecord> name_certs = certs_for_name(h.name);
    std::vector<CertifiedAssociation> assocs = derive_associations(name_certs);

    // Attribute the designation window day by day, collecting lineage
    // roots in order of first appearance.
    std::vector<KeyId> roots;
    DateInterval window = h.when.interval();
    for (Date t = window.first; t <= window.last; t = t.plus_days(1)) {
      const CertifiedAssociation* a = association_for_day(assocs, t);
      if (!a) continue;
      if (std::find(roots.begin(), roots.end(), a->person) == roots.end())
        roots.push_back(a->person);
    }

    if (roots.empty()) {
      ResolutionProof p = base_proof(h, now);
      p.answer = ResolutionProof::Answer::not_found;
      bundles.push_back(finish_proof(std::move(p)));
      return bundles;
    }

    for (const KeyId& root : roots) {
      ResolutionProof p = base_proof(h, now);
      p.lineage_root = root;
      build_person_side(p, root, now);
      bundles.push_back(finish_proof(std::move(p)));
    }
    return bundles;
  }

  // Collapse bundles into the plain historian's result kinds, for
  // agreement checks and human-facing output.
  static ResolutionResult summarize(const std::vector<ResolutionProof>& bundles) {
    ResolutionResult r;
    if (bundles.size() == 1 && bundles[0].lineage_root.is_zero()) {
      r.kind = ResolutionResult::Kind::no_history;
      return r;
    }
    if (bundles.size() == 1) {
      if (bundles[0].current_name) {
        r.kind = ResolutionResult::Kind::resolved;
        r.current = bundles[0].current_name;
      } else {
        r.kind = ResolutionResult::Kind::no_current_name;
      }
      return r;
    }
    r.kind = ResolutionResult::Kind::multivalent;
    for (size_t i = 0; i < bundles.size(); ++i) {
      HolderView v;
      v.ordinal = static_cast<int>(i) + 1;
      v.current = bundles[i].current_name;
      r.holders.push_back(v);
    }
    return r;
  }

 private:
  struct StoredCert {
    Certificate cert;
    Bytes bytes;
  };

  void publish_anchor_locked(Date now) {
    if (journal_->chain().empty()) fail(Errc::bad_request, "nothing to anchor");
    const ChainedEntry& head = journal_->chain().head();
    if (static_cast<int64_t>(head.seq) <= anchors_->last().seq) return;
    anchors_->publish(Anchor{static_cast<int64_t>(head.seq), head.entry_digest, now});
  }

  // Ingest-time validation: signatures at the stated date, and for link
  // certificates the name-side signer must be an identity key assigned to
  // the name (covering the link's start, not revoked there).
  void check_incoming(const Certificate& cert) const {
    if (const auto* link = std::get_if<LinkCertificate>(&cert)) {
      std::vector<KeyId> candidates =
          assigned_keys_at(certs_for_name(link->name), link->start);
      if (candidates.empty())
        fail(Errc::bad_signature,
             "no identity certificate covers " + link->name.to_string() + " on " +
                 link->start.to_string());
      CertVerdict last = CertVerdict::invalid("signature");
      for (const KeyId& key : candidates) {
        last = verify_at(cert, stated_date(cert), archive_, scheme_, key);
        if (last.valid) return;
      }
      fail(Errc::bad_signature, last.reason);
    }
    CertVerdict v = verify_at(cert, stated_date(cert), archive_, scheme_);
    if (!v.valid) fail(Errc::bad_signature, v.reason);
  }

  // Insert one chained certificate into both index attesters.
  void index_certificate(const Bytes& bytes) {
    uint64_t seq = stored_.size();
    StoredCert sc;
    sc.bytes = bytes;
    sc.cert = decode_certificate(bytes);
    CertKind kind = kind_of(sc.cert);
    Date when = certindex::index_date(sc.cert);
    if (auto name = certindex::name_of(sc.cert))
      name_index_.insert(certindex::name_key(*name, kind, when, seq));
    person_index_.insert(
        certindex::person_key(certindex::principal_of(sc.cert), kind, when, seq));
    nonces_seen_.insert(certificate_nonce(sc.cert));
    stored_.push_back(std::move(sc));
  }

  void recommit() {
    commitments_.name_index = name_index_.commit();
    commitments_.person_index = person_index_.commit();
  }

  std::vector<CertRecord> certs_for_name(const PrimaryName& n) const {
    std::vector<CertRecord> out;
    for (uint64_t seq = 0; seq < stored_.size(); ++seq) {
      auto name = certindex::name_of(stored_[seq].cert);
      if (name && *name == n) out.push_back(CertRecord{stored_[seq].cert, seq});
    }
    return out;
  }

  std::vector<CertRecord> certs_for_person(const KeyId& k) const {
    std::vector<CertRecord> out;
    for (uint64_t seq = 0; seq < stored_.size(); ++seq)
      if (certindex::principal_of(stored_[seq].cert) == k)
        out.push_back(CertRecord{stored_[seq].cert, seq});
    return out;
  }

  ResolutionProof base_proof(const HistoricName& h, Date now) const {
    ResolutionProof p;
    p.query = h;
    p.issued_on = now;
    add_name_range(p, h.name);
    return p;
  }

  void add_name_range(ResolutionProof& p, const PrimaryName& n) const {
    for (const auto& existing : p.name_ranges)
      if (existing.name == n) return;
    auto [lo, hi] = certindex::name_bounds(n);
    p.name_ranges.push_back(NamedRange{n, name_index_.scan_range(lo, hi)});
    for (const CertRecord& cr : certs_for_name(n)) cite(p, cr.seq);
  }

  void add_person_range(ResolutionProof& p, const KeyId& k) const {
    for (const auto& existing : p.person_ranges)
      if (existing.key == k) return;
    auto [lo, hi] = certindex::person_bounds(k);
    p.person_ranges.push_back(KeyedRange{k, person_index_.scan_range(lo, hi)});
    for (const CertRecord& cr : certs_for_person(k)) cite(p, cr.seq);
  }

  void cite(ResolutionProof& p, uint64_t seq) const {
    for (const auto& c : p.certs)
      if (c.seq == seq) return;
    ProofCert pc;
    pc.seq = seq;
    pc.bytes = stored_[seq].bytes;
    p.certs.push_back(std::move(pc));
  }

  // Walk the person's key trail, pulling in each key's complete record
  // range, then determine the current name the same way the verifier will.
  void build_person_side(ResolutionProof& p, const KeyId& root, Date now) const {
    std::vector<KeyId> lineage{root};
    add_person_range(p, root);
    KeyId current = root;
    std::set<Digest256> visited{current.fingerprint};
    for (;;) {
      std::vector<DelegationCertificate> delegs;
      for (const CertRecord& cr : certs_for_person(current))
        if (const auto* d = std::get_if<DelegationCertificate>(&cr.cert))
          if (d->time <= now) delegs.push_back(*d);
      KeyId next = walk_delegations(current, delegs, now, archive_);
      if (next == current) break;
      if (!visited.insert(next.fingerprint).second)
        fail(Errc::forked_chain, "delegation cycle");
      lineage.push_back(next);
      add_person_range(p, next);
      current = next;
    }

    // Candidate current names: every name any lineage key ever linked.
    std::set<Digest256> lineage_set = visited;
    std::vector<PrimaryName> candidates;
    for (const KeyId& k : lineage)
      for (const CertRecord& cr : certs_for_person(k))
        if (const auto* link = std::get_if<LinkCertificate>(&cr.cert)) {
          if (std::find(candidates.begin(), candidates.end(), link->name) ==
              candidates.end())
            candidates.push_back(link->name);
        }
    for (const PrimaryName& n : candidates) add_name_range(p, n);

    // Current-name selection over the lineage's associations.
    std::optional<CertifiedAssociation> best;
    PrimaryName best_name;
    for (const PrimaryName& n : candidates) {
      std::vector<CertifiedAssociation> assocs = derive_associations(certs_for_name(n));
      for (const CertifiedAssociation& a : assocs) {
        if (!lineage_set.count(a.person.fingerprint)) continue;
        if (!association_current(a, now)) continue;
        if (!best || a.span.first > best->span.first ||
            (a.span.first == best->span.first &&
             n.to_string() < best_name.to_string()) ||
            (a.span.first == best->span.first && n == best_name &&
             a.link_seq < best->link_seq)) {
          best = a;
          best_name = n;
        }
      }
    }
    if (best) {
      p.answer = ResolutionProof::Answer::resolved;
      p.current_name = best_name;
    } else {
      p.answer = ResolutionProof::Answer::not_found;
    }
  }

  // Attach chain segments once all citations are known.
  ResolutionProof finish_proof(ResolutionProof p) const {
    std::sort(p.certs.begin(), p.certs.end(),
              [](const ProofCert& a, const ProofCert& b) { return a.seq < b.seq; });
    for (ProofCert& c : p.certs) {
      AnchorLog::Bracket b = anchors_->bracket(c.seq);
      if (!b.upper) fail(Errc::not_anchored, "certificate not yet anchored");
      c.segment = ChainSegment::build(journal_->chain(), b);
    }
    return p;
  }

  const SignatureScheme& scheme_;
  KeyArchive archive_;
  CertifiedConfig cfg_;
  Journal* journal_;
  AnchorLog* anchors_;

  mutable std::shared_mutex mu_;
  std::vector<StoredCert> stored_;
  Attester name_index_;
  Attester person_index_;
  Commitments commitments_;
  std::set<Bytes> nonces_seen_;
};

}  // namespace hints
