// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "hints/attester.hpp"

#include <algorithm>
#include <random>

using namespace hints;

namespace {

Bytes key(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("insertion order does not matter", "[attester]") {
  std::vector<Bytes> keys{key("b"), key("d"), key("f")};
  std::vector<AttesterCommitment> roots;
  std::mt19937_64 gen(1);
  for (int perm = 0; perm < 6; ++perm) {
    Attester a;
    std::shuffle(keys.begin(), keys.end(), gen);
    for (const auto& k : keys) a.insert(k);
    a.insert(keys[0]);  // idempotent re-insert
    roots.push_back(a.commit());
  }
  for (const auto& c : roots) {
    CHECK(c == roots.front());
    CHECK(c.count == 3);
  }
}

TEST_CASE("empty attester has the defined empty root", "[attester]") {
  Attester a;
  AttesterCommitment c = a.commit();
  CHECK(c.count == 0);
  CHECK(c.root == empty_attester_root());
  // absence over the empty set verifies with no neighbors
  AttestationProof p = a.attest(key("anything"));
  CHECK(p.kind == AttestationProof::Kind::absence);
  CHECK(verify_attestation(c, p));
}

TEST_CASE("membership and absence over {b,d,f}", "[attester]") {
  Attester a;
  for (auto k : {"b", "d", "f"}) a.insert(key(k));
  AttesterCommitment c = a.commit();

  SECTION("membership") {
    AttestationProof p = a.attest(key("d"));
    CHECK(p.kind == AttestationProof::Kind::membership);
    CHECK(verify_attestation(c, p));
  }
  SECTION("absence cites the neighbors") {
    AttestationProof p = a.attest(key("c"));
    CHECK(p.kind == AttestationProof::Kind::absence);
    REQUIRE(p.left);
    REQUIRE(p.right);
    CHECK(p.left->key == key("b"));
    CHECK(p.right->key == key("d"));
    CHECK(verify_attestation(c, p));
  }
  SECTION("absence below the minimum and above the maximum") {
    AttestationProof lo = a.attest(key("a"));
    CHECK(!lo.left);
    CHECK(verify_attestation(c, lo));
    AttestationProof hi = a.attest(key("g"));
    CHECK(!hi.right);
    CHECK(verify_attestation(c, hi));
  }
  SECTION("proofs do not transfer to a different commitment") {
    AttestationProof p = a.attest(key("d"));
    Attester other;
    for (auto k : {"b", "d", "f", "x"}) other.insert(key(k));
    AttesterCommitment oc = other.commit();
    CHECK_FALSE(verify_attestation(oc, p));
  }
  SECTION("non-adjacent neighbors are rejected") {
    AttestationProof p = a.attest(key("c"));
    p.right = a.attest(key("f")).member;  // f is index 2, not adjacent to b
    AttestationProof q = a.attest(key("e"));
    p.right = q.right;  // now right=f (index 2), left=b (index 0)
    CHECK_FALSE(verify_attestation(c, p));
  }
}

TEST_CASE("attester agrees with a sorted-list oracle", "[attester][property]") {
  std::mt19937_64 gen(20260811);
  auto random_key = [&](size_t maxlen) {
    Bytes k(1 + gen() % maxlen);
    for (auto& b : k) b = uint8_t(gen() % 8);  // tight alphabet: collisions likely
    return k;
  };

  for (int trial = 0; trial < 30; ++trial) {
    Attester a;
    std::set<Bytes> oracle;
    size_t n = 1 + gen() % 300;
    for (size_t i = 0; i < n; ++i) {
      Bytes k = random_key(6);
      a.insert(k);
      oracle.insert(k);
    }
    AttesterCommitment c = a.commit();
    REQUIRE(c.count == oracle.size());

    for (int q = 0; q < 200; ++q) {
      Bytes k = random_key(6);
      bool stored = oracle.count(k) > 0;
      AttestationProof p = a.attest(k);
      REQUIRE((p.kind == AttestationProof::Kind::membership) == stored);
      REQUIRE(verify_attestation(c, p));
      if (!stored) {
        // adjacency oracle: the cited neighbors are the true ones
        auto it = oracle.lower_bound(k);
        if (it != oracle.end())
          REQUIRE(p.right->key == *it);
        else
          REQUIRE(!p.right);
        if (it != oracle.begin())
          REQUIRE(p.left->key == *std::prev(it));
        else
          REQUIRE(!p.left);
      }
    }
  }
}

TEST_CASE("range proofs enumerate exactly the stored keys", "[attester]") {
  Attester a;
  for (auto k : {"apple", "banana", "cherry", "damson", "elder", "fig"})
    a.insert(key(k));
  AttesterCommitment c = a.commit();

  SECTION("interior range") {
    RangeProof p = a.scan_range(key("b"), key("e"));
    REQUIRE(p.members.size() == 3);  // banana, cherry, damson
    CHECK(p.left_fence->key == key("apple"));
    CHECK(p.right_fence->key == key("elder"));
    CHECK(verify_range_proof(c, p));
  }
  SECTION("empty range is a range absence") {
    RangeProof p = a.scan_range(key("cz"), key("da"));
    CHECK(p.members.empty());
    CHECK(verify_range_proof(c, p));
    CHECK(p.left_fence->key == key("cherry"));
    CHECK(p.right_fence->key == key("damson"));
  }
  SECTION("whole-space range has no fences") {
    RangeProof p = a.scan_range(Bytes{}, key("zzzz"));
    CHECK(p.members.size() == 6);
    CHECK(!p.left_fence);
    CHECK(!p.right_fence);
    CHECK(verify_range_proof(c, p));
  }
  SECTION("dropping a member breaks the proof") {
    RangeProof p = a.scan_range(key("b"), key("e"));
    p.members.erase(p.members.begin() + 1);
    CHECK_FALSE(verify_range_proof(c, p));
  }
  SECTION("swapping in a foreign leaf breaks the proof") {
    RangeProof p = a.scan_range(key("b"), key("e"));
    Attester other;
    for (auto k : {"banana", "beet", "cherry", "damson", "elder", "fig"})
      other.insert(key(k));
    other.commit();
    p.members[0] = other.prove_index(0);
    CHECK_FALSE(verify_range_proof(c, p));
  }
  SECTION("range proofs round-trip through canonical encoding") {
    RangeProof p = a.scan_range(key("b"), key("e"));
    Bytes enc = p.encode();
    Decoder d(enc);
    RangeProof back = RangeProof::decode(d);
    d.expect_done();
    CHECK(back.encode() == enc);
    CHECK(verify_range_proof(c, back));
  }
}

TEST_CASE("scale: 2^16 keys, proofs stay within the logarithmic bound",
          "[attester][scale]") {
  Attester a;
  std::mt19937_64 gen(7);
  std::vector<Bytes> sample;
  for (int i = 0; i < (1 << 16); ++i) {
    Bytes k(16);
    for (auto& b : k) b = uint8_t(gen());
    a.insert(k);
    if (i % 4096 == 0) sample.push_back(k);
  }
  AttesterCommitment c = a.commit();
  size_t max_path = 0;
  for (const auto& k : sample) {
    AttestationProof p = a.attest(k);
    REQUIRE(p.kind == AttestationProof::Kind::membership);
    REQUIRE(verify_attestation(c, p));
    max_path = std::max(max_path, p.member->path.size());
  }
  CHECK(max_path <= 17);  // ceil(log2(2^16)) + 1 slack for the uneven top
}
