// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hints {

// Stable error codes. Operation failures (as opposed to ordinary result
// values such as a failed resolution) are thrown as hints::Error carrying
// one of these.
enum class Errc {
  malformed_name,
  bad_date,
  transport_down,
  unknown_challenge,
  stale_challenge,
  unauthorized,
  cooldown_violation,
  already_held,
  clock_regression,
  missing_key,
  signer_unknown,
  forked_chain,
  broken_chain,
  bad_signature,
  stale_nonce,
  corrupt_journal,
  not_anchored,
  bad_request,
  io_error,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::malformed_name: return "MalformedName";
    case Errc::bad_date: return "BadDate";
    case Errc::transport_down: return "TransportDown";
    case Errc::unknown_challenge: return "UnknownChallenge";
    case Errc::stale_challenge: return "StaleChallenge";
    case Errc::unauthorized: return "Unauthorized";
    case Errc::cooldown_violation: return "CooldownViolation";
    case Errc::already_held: return "AlreadyHeld";
    case Errc::clock_regression: return "ClockRegression";
    case Errc::missing_key: return "MissingKey";
    case Errc::signer_unknown: return "SignerUnknown";
    case Errc::forked_chain: return "ForkedChain";
    case Errc::broken_chain: return "BrokenChain";
    case Errc::bad_signature: return "BadSignature";
    case Errc::stale_nonce: return "StaleNonce";
    case Errc::corrupt_journal: return "CorruptJournal";
    case Errc::not_anchored: return "NotAnchored";
    case Errc::bad_request: return "BadRequest";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail = "") {
  throw Error(code, detail);
}

}  // namespace hints
