#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mediacert/metadata.hpp"
#include "mediacert/pki.hpp"

namespace mediacert {

enum class VerificationStatus {
  Verified,
  FailedDigestMismatch,
  FailedSignatureInvalid,
  UntrustedEndorser,
  MalformedSidecar,
  NoSidecar,
};

std::string_view to_string(VerificationStatus status);

/// NoSidecar and Verified are not failures.
constexpr bool is_failure(VerificationStatus s) {
  return s != VerificationStatus::Verified && s != VerificationStatus::NoSidecar;
}

struct VerificationReport {
  VerificationStatus status = VerificationStatus::NoSidecar;
  std::optional<EndorserIdentity> endorser;
  std::optional<EndorsementMetadata> metadata;
  std::string detail;
  std::string asset_locator;
  std::vector<std::string> warnings;
};

}  // namespace mediacert
