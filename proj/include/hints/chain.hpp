// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hints/canonical.hpp"
#include "hints/date.hpp"
#include "hints/digest.hpp"

namespace hints {

// Tamper-evident linked list of records: each entry hashes its sequence
// number, the digest of its payload, and its predecessor's entry digest.
// Earlier records appear earlier in the list; once an entry digest has been
// anchored, nothing before it can change without detection.

struct ChainedEntry {
  uint64_t seq = 0;
  Digest256 payload_digest;
  Digest256 prev_link;  // zero digest for seq 0
  Digest256 entry_digest;

  static Digest256 compute_digest(uint64_t seq, const Digest256& payload,
                                  const Digest256& prev) {
    Encoder e;
    e.u64(1, seq).digest(2, payload).digest(3, prev);
    return sha256(e.take());
  }

  bool self_consistent() const {
    return entry_digest == compute_digest(seq, payload_digest, prev_link);
  }

  Bytes encode() const {
    Encoder e;
    e.u64(1, seq).digest(2, payload_digest).digest(3, prev_link).digest(4, entry_digest);
    return e.take();
  }
  static ChainedEntry decode(ByteView data) {
    Decoder d(data);
    ChainedEntry c;
    c.seq = d.u64(1);
    c.payload_digest = d.digest(2);
    c.prev_link = d.digest(3);
    c.entry_digest = d.digest(4);
    d.expect_done();
    return c;
  }
};

class HashChain {
 public:
  ChainedEntry append(ByteView payload) { return append_digest(sha256(payload)); }

  ChainedEntry append_digest(const Digest256& payload_digest) {
    ChainedEntry e;
    e.seq = entries_.size();
    e.payload_digest = payload_digest;
    e.prev_link = entries_.empty() ? Digest256{} : entries_.back().entry_digest;
    e.entry_digest = ChainedEntry::compute_digest(e.seq, e.payload_digest, e.prev_link);
    entries_.push_back(e);
    return e;
  }

  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const ChainedEntry& at(uint64_t seq) const { return entries_.at(seq); }
  const ChainedEntry& head() const { return entries_.back(); }
  const std::vector<ChainedEntry>& entries() const { return entries_; }

  // Full verification: recompute every digest and link. Returns the index
  // of the first inconsistent entry, or nullopt when the chain is clean.
  // `payload_of` supplies the stored payload for an entry so payload
  // tampering is caught too; pass nullptr to check link structure only.
  static std::optional<uint64_t> verify(
      const std::vector<ChainedEntry>& entries,
      const std::function<ByteView(uint64_t)>& payload_of = nullptr) {
    Digest256 prev;  // zero
    for (uint64_t i = 0; i < entries.size(); ++i) {
      const ChainedEntry& e = entries[i];
      if (e.seq != i) return i;
      if (e.prev_link != prev) return i;
      if (payload_of && sha256(payload_of(i)) != e.payload_digest) return i;
      if (!e.self_consistent()) return i;
      prev = e.entry_digest;
    }
    return std::nullopt;
  }

 private:
  std::vector<ChainedEntry> entries_;
};

// A published commitment of the chain head: every entry with seq at or
// below `seq` existed when the anchor was published. seq -1 with a zero
// digest is the genesis anchor of an empty chain.
struct Anchor {
  int64_t seq = -1;
  Digest256 entry_digest;
  Date published_on;

  bool operator==(const Anchor&) const = default;
};

// Write-once anchor log, optionally mirrored to a file with one line per
// anchor: "seq hex-digest ISO-date". The file stands in for the widely
// witnessed publication medium.
class AnchorLog {
 public:
  // In-memory log seeded with a genesis anchor.
  explicit AnchorLog(Date genesis_date) {
    anchors_.push_back(Anchor{-1, Digest256{}, genesis_date});
  }

  static AnchorLog create(const std::string& path, Date genesis_date) {
    AnchorLog log(genesis_date);
    log.path_ = path;
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << log.line(log.anchors_[0]);
    return log;
  }

  static AnchorLog open(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot read " + path);
    AnchorLog log;
    log.path_ = path;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      size_t sp1 = line.find(' ');
      size_t sp2 = line.find(' ', sp1 + 1);
      if (sp1 == std::string::npos || sp2 == std::string::npos)
        fail(Errc::bad_request, "malformed anchor line: " + line);
      Anchor a;
      a.seq = std::stoll(line.substr(0, sp1));
      a.entry_digest = Digest256::from_hex(line.substr(sp1 + 1, sp2 - sp1 - 1));
      a.published_on = Date::parse(line.substr(sp2 + 1));
      if (!log.anchors_.empty()) log.check_next(a);
      log.anchors_.push_back(a);
    }
    if (log.anchors_.empty()) fail(Errc::bad_request, "anchor log has no genesis");
    return log;
  }

  void publish(const Anchor& a) {
    check_next(a);
    anchors_.push_back(a);
    if (path_) {
      std::ofstream out(*path_, std::ios::app);
      if (!out) fail(Errc::io_error, "cannot append to " + *path_);
      out << line(a);
    }
  }

  const std::vector<Anchor>& anchors() const { return anchors_; }
  const Anchor& last() const { return anchors_.back(); }

  // Nearest anchors strictly before and at-or-after `seq`. The lower
  // anchor always exists (genesis); a missing upper anchor means the entry
  // postdates the last publication.
  struct Bracket {
    Anchor lower;
    std::optional<Anchor> upper;
  };

  Bracket bracket(uint64_t seq) const {
    Bracket b;
    b.lower = anchors_.front();
    for (const Anchor& a : anchors_) {
      if (a.seq < static_cast<int64_t>(seq)) {
        b.lower = a;
      } else {
        b.upper = a;
        break;
      }
    }
    return b;
  }

  const Anchor* by_seq(int64_t seq) const {
    for (const Anchor& a : anchors_)
      if (a.seq == seq) return &a;
    return nullptr;
  }

 private:
  AnchorLog() = default;

  void check_next(const Anchor& a) const {
    const Anchor& last = anchors_.back();
    if (a.seq <= last.seq)
      fail(Errc::bad_request, "anchor log is write-once; seq " +
                                  std::to_string(a.seq) + " not after " +
                                  std::to_string(last.seq));
    if (a.published_on < last.published_on)
      fail(Errc::bad_request, "anchor dates must not decrease");
  }

  static std::string line(const Anchor& a) {
    return std::to_string(a.seq) + " " + a.entry_digest.hex() + " " +
           a.published_on.to_string() + "\n";
  }

  std::vector<Anchor> anchors_;
  std::optional<std::string> path_;
};

// Locate a verified entry between published anchors. The entry must match
// the chain's stored entry bit for bit and the chain around it must be
// consistent; a forged entry with plausible digests but a wrong link fails
// here. Throws NotAnchored when no anchor has been published at or after
// the entry (the bracket then has only a lower bound).
inline AnchorLog::Bracket chain_locate(const ChainedEntry& entry,
                                       const HashChain& chain,
                                       const AnchorLog& anchors) {
  if (entry.seq >= chain.size()) fail(Errc::bad_request, "entry beyond chain head");
  const ChainedEntry& stored = chain.at(entry.seq);
  if (stored.encode() != entry.encode() || !entry.self_consistent())
    fail(Errc::bad_request, "entry does not verify against the chain");
  Digest256 expected_prev = entry.seq == 0 ? Digest256{}
                                           : chain.at(entry.seq - 1).entry_digest;
  if (entry.prev_link != expected_prev)
    fail(Errc::bad_request, "entry does not verify against the chain");
  AnchorLog::Bracket b = anchors.bracket(entry.seq);
  if (!b.upper) fail(Errc::not_anchored, "entry after last anchor");
  return b;
}

// Self-contained positional proof: the payload digests for every entry in
// (lower anchor, upper anchor]. A verifier re-hashes from the lower
// anchor's digest and must land exactly on the upper anchor's digest,
// which pins each intermediate payload digest to its sequence number.
struct ChainSegment {
  int64_t lower_seq = -1;
  int64_t upper_seq = -1;
  std::vector<Digest256> payload_digests;  // seqs lower_seq+1 .. upper_seq

  Bytes encode() const {
    Encoder e;
    e.u64(1, static_cast<uint64_t>(lower_seq + 1));
    e.u64(2, static_cast<uint64_t>(upper_seq + 1));
    Encoder inner;
    for (const auto& d : payload_digests) inner.digest(1, d);
    e.nested(3, inner.take());
    return e.take();
  }
  static ChainSegment decode(Decoder& d) {
    ChainSegment s;
    uint64_t lo = d.u64(1);
    uint64_t hi = d.u64(2);
    // stored shifted by one so the genesis anchor (-1) encodes as 0
    if (lo > (uint64_t(1) << 62) || hi > (uint64_t(1) << 62))
      fail(Errc::bad_request, "segment bounds out of range");
    s.lower_seq = static_cast<int64_t>(lo) - 1;
    s.upper_seq = static_cast<int64_t>(hi) - 1;
    Decoder inner = d.nested(3);
    while (!inner.done()) s.payload_digests.push_back(inner.digest(1));
    return s;
  }

  static ChainSegment build(const HashChain& chain, const AnchorLog::Bracket& b) {
    ChainSegment s;
    s.lower_seq = b.lower.seq;
    s.upper_seq = b.upper ? b.upper->seq : static_cast<int64_t>(chain.size()) - 1;
    for (int64_t i = s.lower_seq + 1; i <= s.upper_seq; ++i)
      s.payload_digests.push_back(chain.at(static_cast<uint64_t>(i)).payload_digest);
    return s;
  }

  // Checks the segment against the two anchors and returns true when the
  // hash walk from `lower` reproduces `upper`.
  bool verify(const Anchor& lower, const Anchor& upper) const {
    if (lower.seq != lower_seq || upper.seq != upper_seq) return false;
    if (upper_seq - lower_seq != static_cast<int64_t>(payload_digests.size()))
      return false;
    Digest256 d = lower.entry_digest;
    for (size_t i = 0; i < payload_digests.size(); ++i) {
      uint64_t seq = static_cast<uint64_t>(lower_seq) + 1 + i;
      d = ChainedEntry::compute_digest(seq, payload_digests[i], d);
    }
    return d == upper.entry_digest;
  }

  // The payload digest this segment pins at `seq`, if covered.
  std::optional<Digest256> payload_at(uint64_t seq) const {
    int64_t s = static_cast<int64_t>(seq);
    if (s <= lower_seq || s > upper_seq) return std::nullopt;
    return payload_digests[static_cast<size_t>(s - lower_seq - 1)];
  }
};

}  // namespace hints
