#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "mediacert/bytes.hpp"
#include "mediacert/document.hpp"
#include "mediacert/metadata.hpp"
#include "mediacert/pki.hpp"
#include "mediacert/report.hpp"

namespace mediacert {

/// Exact preimage fed to the hash and signature.
struct CanonicalMessage {
  Bytes bytes;
};

class Digest {
 public:
  static constexpr std::size_t kSize = 32;
  using Value = std::array<std::uint8_t, kSize>;

  explicit Digest(const Value& value) : value_(value) {}
  /// Lowercase 64-character hex only. Throws Error(InvalidArgument).
  static Digest from_hex(std::string_view hex);
  static bool is_valid_hex(std::string_view hex);

  const Value& value() const noexcept { return value_; }
  std::string hex() const;

  bool operator==(const Digest&) const = default;

 private:
  Value value_;
};

struct SignatureValue {
  Bytes raw;

  std::string b64() const { return base64_encode(raw); }
  static SignatureValue from_b64(std::string_view text) { return {base64_decode(text)}; }
  bool operator==(const SignatureValue&) const = default;
};

/// Emits the canonical preimage piecewise:
///   each metadata field followed by LF, then (chunk mode) the decimal chunk
///   index followed by LF, then Base64 of the media bytes.
/// The header is emitted on construction; media may be fed in any split.
class PreimageStream {
 public:
  using Sink = std::function<void(ByteView)>;

  PreimageStream(const EndorsementMetadata& meta, std::optional<std::uint64_t> chunk_index,
                 Sink sink);
  void update(ByteView media);
  void finish();
  std::size_t buffered() const noexcept { return encoder_.carried(); }

 private:
  Sink sink_;
  Base64Stream encoder_;
  std::string scratch_;
  bool finished_ = false;
};

CanonicalMessage canonical_message(const EndorsementMetadata& meta, const MediaAsset& media);
Digest compute_digest(const EndorsementMetadata& meta, const MediaAsset& media);

/// RSASSA-PKCS1-v1_5 / SHA-256 over the canonical preimage. Throws
/// Error(InvalidKey) for keys below kMinRsaBits.
SignatureValue sign_endorsement(const EndorsementMetadata& meta, const MediaAsset& media,
                                const PrivateKey& key);

/// Full check: endorser extraction, chain to a trust root, signature, then
/// digest cross-check. Never throws; every outcome is a report status.
VerificationReport verify_endorsement(const SidecarDocument& sidecar, const MediaAsset& media,
                                      const TrustStore& trust);

/// Same as verify_endorsement without the trust-chain step. Used by the
/// signer to decide whether an existing sidecar is still good.
VerificationReport verify_integrity(const SidecarDocument& sidecar, const MediaAsset& media);

/// Builds the sidecar document for a whole-asset endorsement.
SidecarDocument make_sidecar(const EndorsementMetadata& meta, const MediaAsset& media,
                             const PrivateKey& key, const Certificate& endorser_cert);

}  // namespace mediacert
