// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "hints/canonical.hpp"
#include "hints/digest.hpp"

namespace hints {

// Undeniable attester: an authenticated dictionary over a sorted key set.
// The commitment is the root of a digest tree over the sorted key sequence;
// membership and absence both come with proofs logarithmic in the number of
// keys. Absence of a key (or of a whole key range) is shown by exhibiting
// the two adjacent stored keys that bracket it.
//
// Tree shape: leaves are the sorted keys; each level pairs adjacent nodes
// (H(0x01 || left || right)) and promotes an unpaired last node unchanged.
// The shape is a pure function of the key count, so equal key sets commit
// to equal roots regardless of insertion order.

struct AttesterCommitment {
  Digest256 root;
  uint64_t count = 0;

  bool operator==(const AttesterCommitment&) const = default;

  Bytes encode() const {
    Encoder e;
    e.digest(1, root).u64(2, count);
    return e.take();
  }
  static AttesterCommitment decode(Decoder& d) {
    AttesterCommitment c;
    c.root = d.digest(1);
    c.count = d.u64(2);
    return c;
  }
};

// Root of the empty dictionary.
inline const Digest256& empty_attester_root() {
  static const Digest256 r = sha256(ByteView{});
  return r;
}

struct PathElem {
  Digest256 sibling;
  bool sibling_on_left = false;
};

// Membership proof for one leaf: its key, its position in the sorted
// sequence, and the sibling digests up to the root.
struct LeafProof {
  Bytes key;
  uint64_t index = 0;
  std::vector<PathElem> path;

  Bytes encode() const {
    Encoder e;
    e.raw(1, key).u64(2, index);
    Encoder inner;
    for (const auto& p : path) {
      inner.digest(1, p.sibling);
      inner.u64(2, p.sibling_on_left ? 1 : 0);
    }
    e.nested(3, inner.take());
    return e.take();
  }
  static LeafProof decode(Decoder& d) {
    LeafProof p;
    p.key = d.bytes_field(1);
    p.index = d.u64(2);
    Decoder inner = d.nested(3);
    while (!inner.done()) {
      PathElem el;
      el.sibling = inner.digest(1);
      el.sibling_on_left = inner.u64(2) != 0;
      p.path.push_back(el);
    }
    return p;
  }
};

namespace detail {

inline Digest256 leaf_digest(ByteView key) {
  return Sha256().update(uint8_t{0x00}).update(key).finish();
}
inline Digest256 node_digest(const Digest256& l, const Digest256& r) {
  return Sha256().update(uint8_t{0x01}).update(l.bytes).update(r.bytes).finish();
}

}  // namespace detail

// Recompute the root a leaf proof implies for a dictionary of `count` keys.
// Returns nullopt when the proof's shape cannot belong to that tree (bad
// index, wrong path length, or direction inconsistent with the position).
inline std::optional<Digest256> leaf_proof_root(const LeafProof& p, uint64_t count) {
  if (count == 0 || p.index >= count) return std::nullopt;
  Digest256 d = detail::leaf_digest(p.key);
  uint64_t idx = p.index;
  uint64_t width = count;
  size_t used = 0;
  while (width > 1) {
    bool has_sibling = (idx ^ 1) < width;
    if (has_sibling) {
      if (used >= p.path.size()) return std::nullopt;
      const PathElem& el = p.path[used++];
      bool sibling_left = (idx & 1) != 0;
      if (el.sibling_on_left != sibling_left) return std::nullopt;
      d = sibling_left ? detail::node_digest(el.sibling, d)
                       : detail::node_digest(d, el.sibling);
    }
    idx >>= 1;
    width = (width + 1) / 2;
  }
  if (used != p.path.size()) return std::nullopt;
  return d;
}

inline bool verify_leaf(const AttesterCommitment& c, const LeafProof& p) {
  auto root = leaf_proof_root(p, c.count);
  return root && *root == c.root;
}

// Single-key attestation: either the key is stored (membership) or it is
// bracketed by two adjacent stored keys (absence).
struct AttestationProof {
  enum class Kind : uint8_t { membership = 1, absence = 2 };
  Kind kind = Kind::membership;
  Bytes target;
  std::optional<LeafProof> member;        // membership
  std::optional<LeafProof> left, right;   // absence neighbors

  Bytes encode() const {
    Encoder e;
    e.u64(1, static_cast<uint64_t>(kind)).raw(2, target);
    Encoder opt;
    if (member) opt.nested(1, member->encode());
    if (left) opt.nested(2, left->encode());
    if (right) opt.nested(3, right->encode());
    e.nested(3, opt.take());
    return e.take();
  }
  static AttestationProof decode(Decoder& d) {
    AttestationProof p;
    uint64_t kind = d.u64(1);
    if (kind != 1 && kind != 2) fail(Errc::bad_request, "bad attestation kind");
    p.kind = static_cast<Kind>(kind);
    p.target = d.bytes_field(2);
    Decoder opt = d.nested(3);
    while (!opt.done()) {
      uint8_t tag = opt.peek_tag();
      Decoder inner = opt.nested(tag);
      LeafProof lp = LeafProof::decode(inner);
      inner.expect_done();
      if (tag == 1) p.member = std::move(lp);
      else if (tag == 2) p.left = std::move(lp);
      else if (tag == 3) p.right = std::move(lp);
      else fail(Errc::bad_request, "bad attestation field");
    }
    return p;
  }
};

// Completeness proof for a closed key range [lo, hi]: every stored key in
// the range (in order, at consecutive indices) plus the adjacent stored
// keys just outside it. An empty `members` list is a range-absence proof.
struct RangeProof {
  Bytes lo, hi;
  std::optional<LeafProof> left_fence, right_fence;
  std::vector<LeafProof> members;

  Bytes encode() const {
    Encoder e;
    e.raw(1, lo).raw(2, hi);
    Encoder fences;
    if (left_fence) fences.nested(2, left_fence->encode());
    if (right_fence) fences.nested(3, right_fence->encode());
    e.nested(3, fences.take());
    Encoder mem;
    for (const auto& m : members) mem.nested(1, m.encode());
    e.nested(4, mem.take());
    return e.take();
  }
  static RangeProof decode(Decoder& d) {
    RangeProof p;
    p.lo = d.bytes_field(1);
    p.hi = d.bytes_field(2);
    Decoder fences = d.nested(3);
    while (!fences.done()) {
      uint8_t tag = fences.peek_tag();
      Decoder inner = fences.nested(tag);
      LeafProof lp = LeafProof::decode(inner);
      inner.expect_done();
      if (tag == 2) p.left_fence = std::move(lp);
      else if (tag == 3) p.right_fence = std::move(lp);
      else fail(Errc::bad_request, "bad range proof field");
    }
    Decoder mem = d.nested(4);
    while (!mem.done()) {
      Decoder inner = mem.nested(1);
      p.members.push_back(LeafProof::decode(inner));
      inner.expect_done();
    }
    return p;
  }
};

class Attester {
 public:
  // Idempotent: re-inserting an existing key is allowed and changes nothing.
  void insert(ByteView key) {
    auto [it, fresh] = keys_.emplace(key.begin(), key.end());
    dirty_ = dirty_ || fresh;
  }
  void insert(const Bytes& key) { insert(ByteView{key}); }

  uint64_t size() const { return keys_.size(); }

  // Commit the current key set: rebuilds the digest tree and returns the
  // commitment. Proof generation always works against the last commit.
  AttesterCommitment commit() {
    if (dirty_) {
      leaves_.assign(keys_.begin(), keys_.end());
      levels_.clear();
      std::vector<Digest256> level;
      level.reserve(leaves_.size());
      for (const auto& k : leaves_) level.push_back(detail::leaf_digest(k));
      levels_.push_back(level);
      while (levels_.back().size() > 1) {
        const auto& prev = levels_.back();
        std::vector<Digest256> next;
        next.reserve((prev.size() + 1) / 2);
        for (size_t i = 0; i + 1 < prev.size(); i += 2)
          next.push_back(detail::node_digest(prev[i], prev[i + 1]));
        if (prev.size() % 2) next.push_back(prev.back());
        levels_.push_back(std::move(next));
      }
      dirty_ = false;
    }
    return commitment();
  }

  AttesterCommitment commitment() const {
    if (dirty_) fail(Errc::bad_request, "attester has uncommitted keys");
    AttesterCommitment c;
    c.count = leaves_.size();
    c.root = leaves_.empty() ? empty_attester_root() : levels_.back()[0];
    return c;
  }

  bool committed_contains(ByteView key) const {
    return std::binary_search(leaves_.begin(), leaves_.end(),
                              Bytes(key.begin(), key.end()));
  }

  LeafProof prove_index(uint64_t index) const {
    if (dirty_) fail(Errc::bad_request, "attester has uncommitted keys");
    if (index >= leaves_.size()) fail(Errc::bad_request, "leaf index out of range");
    LeafProof p;
    p.key = leaves_[index];
    p.index = index;
    uint64_t idx = index;
    for (size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
      uint64_t width = levels_[lvl].size();
      if ((idx ^ 1) < width) {
        PathElem el;
        el.sibling = levels_[lvl][idx ^ 1];
        el.sibling_on_left = (idx & 1) != 0;
        p.path.push_back(el);
      }
      idx >>= 1;
    }
    return p;
  }

  AttestationProof attest(ByteView key) const {
    if (dirty_) fail(Errc::bad_request, "attester has uncommitted keys");
    AttestationProof p;
    p.target.assign(key.begin(), key.end());
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), p.target);
    if (it != leaves_.end() && *it == p.target) {
      p.kind = AttestationProof::Kind::membership;
      p.member = prove_index(static_cast<uint64_t>(it - leaves_.begin()));
      return p;
    }
    p.kind = AttestationProof::Kind::absence;
    if (it != leaves_.begin())
      p.left = prove_index(static_cast<uint64_t>(it - leaves_.begin()) - 1);
    if (it != leaves_.end())
      p.right = prove_index(static_cast<uint64_t>(it - leaves_.begin()));
    return p;
  }

  // Everything stored in [lo, hi], with the bracketing keys outside it.
  RangeProof scan_range(ByteView lo, ByteView hi) const {
    if (dirty_) fail(Errc::bad_request, "attester has uncommitted keys");
    RangeProof p;
    p.lo.assign(lo.begin(), lo.end());
    p.hi.assign(hi.begin(), hi.end());
    if (p.hi < p.lo) fail(Errc::bad_request, "inverted scan range");
    auto first = std::lower_bound(leaves_.begin(), leaves_.end(), p.lo);
    auto past = std::upper_bound(leaves_.begin(), leaves_.end(), p.hi);
    if (first != leaves_.begin())
      p.left_fence = prove_index(static_cast<uint64_t>(first - leaves_.begin()) - 1);
    if (past != leaves_.end())
      p.right_fence = prove_index(static_cast<uint64_t>(past - leaves_.begin()));
    for (auto it = first; it != past; ++it)
      p.members.push_back(prove_index(static_cast<uint64_t>(it - leaves_.begin())));
    return p;
  }

  const std::vector<Bytes>& committed_leaves() const { return leaves_; }

 private:
  std::set<Bytes> keys_;
  std::vector<Bytes> leaves_;
  std::vector<std::vector<Digest256>> levels_;
  bool dirty_ = true;
};

inline bool verify_attestation(const AttesterCommitment& c,
                               const AttestationProof& p) {
  if (p.kind == AttestationProof::Kind::membership) {
    return p.member && !p.left && !p.right && p.member->key == p.target &&
           verify_leaf(c, *p.member);
  }
  // Absence: bracketing neighbors must be adjacent leaves and must straddle
  // the target strictly.
  if (p.member) return false;
  if (c.count == 0) return !p.left && !p.right && c.root == empty_attester_root();
  if (p.left && !verify_leaf(c, *p.left)) return false;
  if (p.right && !verify_leaf(c, *p.right)) return false;
  if (p.left && !(p.left->key < p.target)) return false;
  if (p.right && !(p.target < p.right->key)) return false;
  uint64_t lo_index = p.left ? p.left->index + 1 : 0;
  uint64_t hi_index = p.right ? p.right->index : c.count;
  return lo_index == hi_index;
}

// Structural check of a range proof against a commitment: fences bracket
// the member block tightly, member indices are consecutive, keys are sorted
// and inside [lo, hi], and every leaf proof verifies. The caller still has
// to check that (lo, hi) are the bounds it meant to scan.
inline bool verify_range_proof(const AttesterCommitment& c, const RangeProof& p) {
  if (p.hi < p.lo) return false;
  if (c.count == 0)
    return !p.left_fence && !p.right_fence && p.members.empty() &&
           c.root == empty_attester_root();
  uint64_t first_index = p.left_fence ? p.left_fence->index + 1 : 0;
  uint64_t past_index = p.right_fence ? p.right_fence->index : c.count;
  if (past_index < first_index) return false;
  if (past_index - first_index != p.members.size()) return false;
  if (p.left_fence) {
    if (!(p.left_fence->key < p.lo)) return false;
    if (!verify_leaf(c, *p.left_fence)) return false;
  }
  if (p.right_fence) {
    if (!(p.hi < p.right_fence->key)) return false;
    if (!verify_leaf(c, *p.right_fence)) return false;
  }
  const Bytes* prev = nullptr;
  for (size_t i = 0; i < p.members.size(); ++i) {
    const LeafProof& m = p.members[i];
    if (m.index != first_index + i) return false;
    if (m.key < p.lo || p.hi < m.key) return false;
    if (prev && !(*prev < m.key)) return false;
    if (!verify_leaf(c, m)) return false;
    prev = &m.key;
  }
  return true;
}

}  // namespace hints
