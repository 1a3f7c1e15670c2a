// SPDX-License-Identifier: Apache-2.0
//
// End-to-end certified flow as a library consumer sees it: issue the
// certificates for a small name history, resolve a historic name, and
// verify the returned proof bundle against public material only.

#include <iostream>

#include "hints/hints.hpp"

using namespace hints;

int main() {
  Ed25519Scheme scheme;
  SeededRng rng(2026);
  Date today = Date::from_ymd(2001, 9, 15);

  KeyPair yahoo = scheme.generate(rng);    // name-space provider
  KeyPair sample = scheme.generate(rng);   // another provider
  KeyPair bound_key = scheme.generate(rng);   // key the provider binds to the name
  KeyPair bound_key2 = scheme.generate(rng);
  KeyPair person_old = scheme.generate(rng);  // the mobile person's key trail
  KeyPair person_new = scheme.generate(rng);

  KeyArchive archive;
  archive.add(scheme, "yahoo.com", yahoo.pub, Date::from_ymd(1999, 1, 1),
              Date::from_ymd(2002, 12, 31));
  archive.add(scheme, "sample.edu", sample.pub, Date::from_ymd(2000, 1, 1),
              Date::from_ymd(2003, 12, 31));
  archive.add_person_key(scheme, bound_key.pub, Date::from_ymd(1999, 1, 1),
                         Date::from_ymd(2002, 12, 31));
  archive.add_person_key(scheme, bound_key2.pub, Date::from_ymd(2001, 1, 1),
                         Date::from_ymd(2003, 12, 31));
  archive.add_person_key(scheme, person_old.pub, Date::from_ymd(1999, 6, 1),
                         Date::from_ymd(2001, 6, 30));
  archive.add_person_key(scheme, person_new.pub, Date::from_ymd(2001, 5, 1),
                         Date::from_ymd(2003, 6, 30));

  Journal chain_store;
  AnchorLog anchors(Date::from_ymd(1999, 1, 1));
  CertifiedHistorian historian(scheme, archive, CertifiedConfig{4, true},
                               &chain_store, &anchors);

  PrimaryName jmobile = PrimaryName::parse("jmobile@yahoo.com");
  PrimaryName jane_edu = PrimaryName::parse("jane@sample.edu");

  historian.ingest(issue_identity(scheme, "yahoo.com", "jmobile",
                                  scheme.key_id(bound_key.pub), Date::from_ymd(1999, 8, 1),
                                  Date::from_ymd(2001, 7, 31), yahoo,
                                  Date::from_ymd(1999, 8, 1), rng),
                   Date::from_ymd(1999, 8, 1));
  historian.ingest(issue_link(scheme, jmobile, bound_key, person_old,
                              Date::from_ymd(2000, 3, 2), Date::from_ymd(2000, 5, 1),
                              Date::from_ymd(2000, 3, 2), rng),
                   Date::from_ymd(2000, 3, 2));
  historian.ingest(issue_revocation(scheme, "yahoo.com", "jmobile",
                                    scheme.key_id(bound_key.pub),
                                    Date::from_ymd(2000, 5, 25), yahoo,
                                    Date::from_ymd(2000, 5, 25), rng),
                   Date::from_ymd(2000, 5, 25));
  historian.ingest(issue_delegation(scheme, person_old, person_new,
                                    Date::from_ymd(2001, 6, 1),
                                    Date::from_ymd(2001, 6, 1), rng),
                   Date::from_ymd(2001, 6, 1));
  historian.ingest(issue_identity(scheme, "sample.edu", "jane",
                                  scheme.key_id(bound_key2.pub),
                                  Date::from_ymd(2001, 8, 1), Date::from_ymd(2003, 7, 31),
                                  sample, Date::from_ymd(2001, 8, 1), rng),
                   Date::from_ymd(2001, 8, 1));
  historian.ingest(issue_link(scheme, jane_edu, bound_key2, person_new,
                              Date::from_ymd(2001, 8, 1), Date::from_ymd(2001, 11, 1),
                              Date::from_ymd(2001, 8, 1), rng),
                   Date::from_ymd(2001, 8, 1));

  HistoricName query = parse_historic_name("jmobile@yahoo.com?2000-03");
  auto bundles = historian.certified_resolve(query, today);

  for (const ResolutionProof& proof : bundles) {
    std::cout << query.to_string() << " -> "
              << (proof.current_name ? proof.current_name->to_string() : "(not found)")
              << "\n";
    std::cout << "  certificates cited: " << proof.certs.size() << "\n";
    VerifyOutcome v = verify_resolution(proof, anchors, archive,
                                        historian.commitments(), scheme);
    std::cout << "  offline verification: "
              << (v.accepted ? "accept" : "reject(" + v.reason + ")") << "\n";
  }
  return 0;
}
