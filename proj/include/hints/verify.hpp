// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hints/certified.hpp"

namespace hints {

// Correspondent-side verification of a resolution proof. Inputs are public
// material only: the anchor log, the key archive, and the historian's
// published index commitments. Nothing here touches historian state; a
// proof that passes can be trusted even if the historian is corrupt.
//
// Check order (the first failure is reported):
//   chain-position   a cited certificate is not where the anchored chain
//                    says it is, or its anchors are unknown
//   temporal-order   a chain segment does not actually bracket the
//                    certificate it claims to position
//   missing-absence  an index range proof is absent, fails against the
//                    commitment, or does not cover what it must
//   signer-unknown / key-expired-at-issuance / signature
//                    a certificate's signatures do not verify at its
//                    stated date under the archived keys
//   delegation       the person-key trail cannot be walked (missing range,
//                    fork, break, or a current name signed off-trail)
//   answer-mismatch  the certificates are all genuine but do not support
//                    the stated answer
//   malformed        structural problems in the bundle itself

struct VerifyOutcome {
  bool accepted = false;
  std::string reason;
  std::string detail;

  static VerifyOutcome ok() { return {true, "", ""}; }
  static VerifyOutcome reject(std::string why, std::string what) {
    return {false, std::move(why), std::move(what)};
  }
};

namespace verifydetail {

struct WorkingCert {
  Certificate cert;
  uint64_t seq = 0;
};

}  // namespace verifydetail

inline VerifyOutcome verify_resolution(const ResolutionProof& p,
                                       const AnchorLog& anchors,
                                       const KeyArchive& archive,
                                       const Commitments& commitments,
                                       const SignatureScheme& scheme) {
  using verifydetail::WorkingCert;
  auto reject = VerifyOutcome::reject;

  // Structural expectations.
  if (p.name_ranges.empty() || !(p.name_ranges[0].name == p.query.name))
    return reject("malformed", "bundle lacks the query name's index range");
  if (p.answer == ResolutionProof::Answer::not_found && p.current_name)
    return reject("malformed", "not-found answer carries a name");
  if (p.answer == ResolutionProof::Answer::resolved && !p.current_name)
    return reject("malformed", "resolved answer without a name");

  // Every cited certificate must sit where the anchored chain says.
  std::map<uint64_t, WorkingCert> by_seq;
  for (const ProofCert& pc : p.certs) {
    if (by_seq.count(pc.seq)) return reject("malformed", "duplicate chain position");
    if (!(pc.segment.lower_seq < static_cast<int64_t>(pc.seq) &&
          static_cast<int64_t>(pc.seq) <= pc.segment.upper_seq))
      return reject("temporal-order",
                    "segment does not bracket seq " + std::to_string(pc.seq));
    const Anchor* lower = anchors.by_seq(pc.segment.lower_seq);
    const Anchor* upper = anchors.by_seq(pc.segment.upper_seq);
    if (!lower || !upper)
      return reject("chain-position",
                    "anchors not published for seq " + std::to_string(pc.seq));
    if (!pc.segment.verify(*lower, *upper))
      return reject("chain-position", "segment hash walk failed");
    auto pinned = pc.segment.payload_at(pc.seq);
    if (!pinned || *pinned != sha256(pc.bytes))
      return reject("chain-position",
                    "certificate bytes differ from the archived record at seq " +
                        std::to_string(pc.seq));
    WorkingCert wc;
    try {
      wc.cert = decode_certificate(pc.bytes);
    } catch (const Error& e) {
      return reject("malformed", e.what());
    }
    wc.seq = pc.seq;
    by_seq.emplace(pc.seq, std::move(wc));
  }

  // Index ranges: each must cover its whole canonical key interval, verify
  // against the published commitment, and expose every member's
  // certificate. The working sets below are built only from committed
  // range members, so stray certificates carry no weight.
  std::map<std::string, std::vector<CertRecord>> certs_by_name;
  std::map<Digest256, std::vector<CertRecord>> certs_by_person;

  for (const NamedRange& nr : p.name_ranges) {
    auto [lo, hi] = certindex::name_bounds(nr.name);
    if (nr.range.lo != lo || nr.range.hi != hi)
      return reject("missing-absence",
                    "range bounds do not cover " + nr.name.to_string());
    if (!verify_range_proof(commitments.name_index, nr.range))
      return reject("missing-absence",
                    "index range for " + nr.name.to_string() + " does not verify");
    std::vector<CertRecord> members;
    for (const LeafProof& m : nr.range.members) {
      certindex::DecodedKey key{};
      std::string keyed_name;
      try {
        Decoder d(m.key);
        keyed_name = d.str(1);
        key = certindex::decode_tail(d);
      } catch (const Error&) {
        return reject("missing-absence", "undecodable index key");
      }
      auto it = by_seq.find(key.seq);
      if (it == by_seq.end())
        return reject("missing-absence",
                      "committed certificate at seq " + std::to_string(key.seq) +
                          " is not in the bundle");
      const Certificate& cert = it->second.cert;
      auto cname = certindex::name_of(cert);
      if (keyed_name != nr.name.to_string() || !cname ||
          !(cname->to_string() == keyed_name) || kind_of(cert) != key.kind ||
          !(certindex::index_date(cert) == key.when))
        return reject("missing-absence", "index key does not match its certificate");
      members.push_back(CertRecord{cert, key.seq});
    }
    certs_by_name[nr.name.to_string()] = std::move(members);
  }

  for (const KeyedRange& kr : p.person_ranges) {
    auto [lo, hi] = certindex::person_bounds(kr.key);
    if (kr.range.lo != lo || kr.range.hi != hi)
      return reject("missing-absence", "person range bounds do not cover the key");
    if (!verify_range_proof(commitments.person_index, kr.range))
      return reject("missing-absence", "person index range does not verify");
    std::vector<CertRecord> members;
    for (const LeafProof& m : kr.range.members) {
      certindex::DecodedKey key{};
      Digest256 keyed_principal;
      try {
        Decoder d(m.key);
        keyed_principal = d.digest(1);
        key = certindex::decode_tail(d);
      } catch (const Error&) {
        return reject("missing-absence", "undecodable index key");
      }
      auto it = by_seq.find(key.seq);
      if (it == by_seq.end())
        return reject("missing-absence",
                      "committed certificate at seq " + std::to_string(key.seq) +
                          " is not in the bundle");
      const Certificate& cert = it->second.cert;
      if (!(keyed_principal == kr.key.fingerprint) ||
          !(certindex::principal_of(cert) == kr.key) ||
          kind_of(cert) != key.kind || !(certindex::index_date(cert) == key.when))
        return reject("missing-absence", "index key does not match its certificate");
      members.push_back(CertRecord{cert, key.seq});
    }
    certs_by_person[kr.key.fingerprint] = std::move(members);
  }

  // Signature validity at each certificate's stated date. A link's
  // name-side signature must verify under one of the identity keys
  // assigned to the name when the link starts.
  auto check_cert = [&](const CertRecord& cr,
                        const std::vector<CertRecord>& same_name) -> VerifyOutcome {
    try {
      if (const auto* link = std::get_if<LinkCertificate>(&cr.cert)) {
        std::vector<KeyId> candidates = assigned_keys_at(same_name, link->start);
        if (candidates.empty())
          return reject("signature",
                        "no identity certificate covers " + link->name.to_string() +
                            " when the link starts");
        CertVerdict last = CertVerdict::invalid("signature");
        for (const KeyId& key : candidates) {
          last = verify_at(cr.cert, stated_date(cr.cert), archive, scheme, key);
          if (last.valid) return VerifyOutcome::ok();
        }
        return reject(last.reason, "certificate at seq " + std::to_string(cr.seq));
      }
      CertVerdict v = verify_at(cr.cert, stated_date(cr.cert), archive, scheme);
      if (!v.valid)
        return reject(v.reason, "certificate at seq " + std::to_string(cr.seq));
    } catch (const Error& e) {
      if (e.code() == Errc::signer_unknown) return reject("signer-unknown", e.what());
      return reject("malformed", e.what());
    }
    return VerifyOutcome::ok();
  };

  for (const auto& [name_text, certs] : certs_by_name) {
    for (const CertRecord& cr : certs) {
      VerifyOutcome v = check_cert(cr, certs);
      if (!v.accepted) return v;
    }
  }
  for (const auto& [fp, certs] : certs_by_person) {
    for (const CertRecord& cr : certs) {
      if (!std::holds_alternative<DelegationCertificate>(cr.cert)) continue;
      VerifyOutcome v = check_cert(cr, {});
      if (!v.accepted) return v;
    }
  }

  // Re-run the resolution over the committed record sets: attribute the
  // designation window, then walk the key trail to the current name. The
  // answer must fall out of the certificates, not be taken on faith.
  const std::vector<CertRecord>& query_certs =
      certs_by_name[p.query.name.to_string()];
  std::vector<CertifiedAssociation> assocs = derive_associations(query_certs);
  std::vector<KeyId> roots;
  DateInterval window = p.query.when.interval();
  for (Date t = window.first; t <= window.last; t = t.plus_days(1)) {
    const CertifiedAssociation* a = association_for_day(assocs, t);
    if (!a) continue;
    if (std::find(roots.begin(), roots.end(), a->person) == roots.end())
      roots.push_back(a->person);
  }

  if (p.lineage_root.is_zero()) {
    if (!roots.empty())
      return reject("answer-mismatch", "the name does have holders in that window");
    if (p.answer != ResolutionProof::Answer::not_found)
      return reject("answer-mismatch", "empty history cannot resolve");
    return VerifyOutcome::ok();
  }
  if (std::find(roots.begin(), roots.end(), p.lineage_root) == roots.end())
    return reject("answer-mismatch",
                  "claimed person does not hold the name in that window");

  // Delegation walk, restricted to committed per-key ranges.
  std::vector<KeyId> lineage{p.lineage_root};
  std::set<Digest256> lineage_set{p.lineage_root.fingerprint};
  KeyId current = p.lineage_root;
  for (;;) {
    auto rit = certs_by_person.find(current.fingerprint);
    if (rit == certs_by_person.end())
      return reject("delegation",
                    "no committed record range for key " + current.display());
    std::vector<DelegationCertificate> delegs;
    for (const CertRecord& cr : rit->second)
      if (const auto* d = std::get_if<DelegationCertificate>(&cr.cert))
        if (d->time <= p.issued_on) delegs.push_back(*d);
    KeyId next;
    try {
      next = walk_delegations(current, delegs, p.issued_on, archive);
    } catch (const Error& e) {
      return reject("delegation", e.what());
    }
    if (next == current) break;
    if (!lineage_set.insert(next.fingerprint).second)
      return reject("delegation", "delegation cycle");
    lineage.push_back(next);
    current = next;
  }

  // Current-name selection over everything the trail ever linked.
  std::optional<CertifiedAssociation> best;
  PrimaryName best_name;
  for (const KeyId& k : lineage) {
    for (const CertRecord& cr : certs_by_person[k.fingerprint]) {
      const auto* link = std::get_if<LinkCertificate>(&cr.cert);
      if (!link) continue;
      auto nit = certs_by_name.find(link->name.to_string());
      if (nit == certs_by_name.end())
        return reject("missing-absence",
                      "no committed range for linked name " + link->name.to_string());
      for (const CertifiedAssociation& a : derive_associations(nit->second)) {
        if (!lineage_set.count(a.person.fingerprint)) continue;
        if (!association_current(a, p.issued_on)) continue;
        if (!best || a.span.first > best->span.first ||
            (a.span.first == best->span.first &&
             link->name.to_string() < best_name.to_string()) ||
            (a.span.first == best->span.first && link->name == best_name &&
             a.link_seq < best->link_seq)) {
          best = a;
          best_name = link->name;
        }
      }
    }
  }

  if (p.answer == ResolutionProof::Answer::resolved) {
    if (!best) return reject("answer-mismatch", "no current association exists");
    if (!(best_name == *p.current_name))
      return reject("answer-mismatch", "certificates support " + best_name.to_string() +
                                           ", not " + p.current_name->to_string());
  } else {
    if (best)
      return reject("answer-mismatch",
                    "a current association exists: " + best_name.to_string());
  }
  return VerifyOutcome::ok();
}

// File-driven verification: proof bundle + anchor log + key archive (+
// commitments) on disk, nothing else.
inline VerifyOutcome verify_resolution_files(const std::string& proof_path,
                                             const std::string& anchors_path,
                                             const std::string& archive_path,
                                             const std::string& commitments_path,
                                             const SignatureScheme& scheme,
                                             const PublicKey& archive_authority) {
  ResolutionProof proof = ResolutionProof::load(proof_path);
  AnchorLog anchors = AnchorLog::open(anchors_path);
  KeyArchive archive = KeyArchive::load(archive_path, scheme, archive_authority);
  Commitments commitments = Commitments::load(commitments_path);
  return verify_resolution(proof, anchors, archive, commitments, scheme);
}

}  // namespace hints
