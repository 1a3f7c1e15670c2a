// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "hints/chain.hpp"
#include "hints/digest.hpp"

namespace hints {

// Append-only mutation journal: one canonical-encoded mutation per line,
// each line carrying its hash-chain entry digest. The same chaining that
// makes the certified store tamper-evident doubles as per-line corruption
// detection for the plain historian's journal.
//
// Line format: "<seq> <entry-digest hex> <base64 payload>"
class Journal {
 public:
  Journal() = default;

  static Journal open(const std::string& path) {
    Journal j;
    j.path_ = path;
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::string line;
      uint64_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        j.payloads_.push_back(parse_line(line, lineno, j.chain_));
      }
    }
    return j;
  }

  // Verify and return every payload without keeping a writer open.
  static std::vector<Bytes> read_all(const std::string& path) {
    return open(path).payloads_;
  }

  void append(ByteView payload) {
    ChainedEntry e = chain_.append(payload);
    payloads_.emplace_back(payload.begin(), payload.end());
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::binary | std::ios::app);
      if (!out) fail(Errc::io_error, "cannot append to " + path_);
      out << e.seq << " " << e.entry_digest.hex() << " "
          << base64_encode(payload) << "\n";
    }
  }

  const std::vector<Bytes>& payloads() const { return payloads_; }
  size_t size() const { return payloads_.size(); }
  const HashChain& chain() const { return chain_; }

 private:
  static Bytes parse_line(const std::string& line, uint64_t lineno,
                          HashChain& chain) {
    auto corrupt = [&](const std::string& why) {
      fail(Errc::corrupt_journal, "line " + std::to_string(lineno) + ": " + why);
    };
    size_t sp1 = line.find(' ');
    size_t sp2 = line.find(' ', sp1 + 1);
    if (sp1 == std::string::npos || sp2 == std::string::npos)
      corrupt("malformed line");
    uint64_t seq = 0;
    try {
      seq = std::stoull(line.substr(0, sp1));
    } catch (...) {
      corrupt("bad sequence number");
    }
    if (seq != chain.size()) corrupt("sequence out of order");
    Digest256 claimed;
    Bytes payload;
    try {
      claimed = Digest256::from_hex(line.substr(sp1 + 1, sp2 - sp1 - 1));
      payload = base64_decode(line.substr(sp2 + 1));
    } catch (const Error&) {
      corrupt("undecodable line");
    }
    ChainedEntry e = chain.append(payload);
    if (e.entry_digest != claimed) corrupt("digest mismatch");
    return payload;
  }

  std::string path_;
  HashChain chain_;
  std::vector<Bytes> payloads_;
};

}  // namespace hints
