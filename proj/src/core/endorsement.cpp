#include <openssl/evp.h>

#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "crypto_internal.hpp"
#include "openssl_util.hpp"

namespace mediacert {

using detail::last_ssl_error;
using detail::MdCtxPtr;

Digest Digest::from_hex(std::string_view hex) {
  if (!is_valid_hex(hex)) throw Error(Errc::InvalidArgument, "digest must be 64 lowercase hex chars");
  Value value{};
  auto nibble = [](char c) { return c <= '9' ? c - '0' : c - 'a' + 10; };
  for (std::size_t i = 0; i < kSize; ++i) {
    value[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return Digest(value);
}

bool Digest::is_valid_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) return false;
  for (char c : hex) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::string Digest::hex() const { return hex_encode(value_); }

PreimageStream::PreimageStream(const EndorsementMetadata& meta,
                               std::optional<std::uint64_t> chunk_index, Sink sink)
    : sink_(std::move(sink)) {
  std::string header;
  for (const std::string* field : meta.fields()) {
    header += *field;
    header += '\n';
  }
  if (chunk_index) {
    header += std::to_string(*chunk_index);
    header += '\n';
  }
  sink_(as_bytes(header));
}

void PreimageStream::update(ByteView media) {
  if (media.empty()) return;
  scratch_.clear();
  encoder_.update(media, scratch_);
  if (!scratch_.empty()) sink_(as_bytes(scratch_));
}

void PreimageStream::finish() {
  if (finished_) return;
  finished_ = true;
  scratch_.clear();
  encoder_.finish(scratch_);
  if (!scratch_.empty()) sink_(as_bytes(scratch_));
}


CanonicalMessage canonical_message(const EndorsementMetadata& meta, const MediaAsset& media) {
  CanonicalMessage msg;
  msg.bytes.reserve(4 * (media.bytes.size() + 2) / 3 + 64);
  PreimageStream stream(meta, std::nullopt, [&](ByteView b) {
    msg.bytes.insert(msg.bytes.end(), b.begin(), b.end());
  });
  stream.update(media.bytes);
  stream.finish();
  return msg;
}

Digest compute_digest(const EndorsementMetadata& meta, const MediaAsset& media) {
  detail::Sha256 sha;
  PreimageStream stream(meta, std::nullopt, [&](ByteView b) { sha.update(b); });
  stream.update(media.bytes);
  stream.finish();
  return sha.finish();
}

SignatureValue sign_endorsement(const EndorsementMetadata& meta, const MediaAsset& media,
                                const PrivateKey& key) {
  return detail::sign_preimage(key, [&](PreimageStream::Sink sink) {
    PreimageStream stream(meta, std::nullopt, std::move(sink));
    stream.update(media.bytes);
    stream.finish();
  });
}

namespace {

VerificationReport verify_impl(const SidecarDocument& sidecar, const MediaAsset& media,
                               const TrustStore* trust) {
  VerificationReport report;
  report.asset_locator = media.locator;
  report.metadata = sidecar.metadata;

  // (1) endorser identity from the embedded certificate
  Bytes cert_der;
  try {
    cert_der = base64_decode(sidecar.certificate_b64);
    report.endorser = extract_endorser(cert_der);
  } catch (const Error& e) {
    report.status = VerificationStatus::MalformedSidecar;
    report.detail = std::string("embedded certificate: ") + e.what();
    return report;
  }

  // (2) chain to a trust root
  if (trust != nullptr) {
    const ChainCheck chain = check_chain(Certificate::from_der(cert_der), *trust);
    if (!chain.trusted) {
      report.status = VerificationStatus::UntrustedEndorser;
      report.detail = chain.detail;
      return report;
    }
    if (chain.expiry_warning) report.warnings.push_back(chain.detail);
  }

  // (3) signature over the recomputed preimage; digest is computed alongside
  Bytes signature;
  try {
    signature = base64_decode(sidecar.signature_b64);
  } catch (const Error&) {
    report.status = VerificationStatus::MalformedSidecar;
    report.detail = "SignatureValue is not valid Base64";
    return report;
  }
  detail::SignatureCheck check(report.endorser->public_key.get());
  detail::Sha256 sha;
  PreimageStream stream(sidecar.metadata, std::nullopt, [&](ByteView b) {
    check.update(b);
    sha.update(b);
  });
  stream.update(media.bytes);
  stream.finish();
  const Digest recomputed = sha.finish();
  if (!check.finish(signature)) {
    report.status = VerificationStatus::FailedSignatureInvalid;
    report.detail = "signature does not match media and metadata";
    return report;
  }

  // (4) stored digest cross-check
  if (recomputed.hex() != sidecar.digest_hex) {
    report.status = VerificationStatus::FailedDigestMismatch;
    report.detail = "DigestValue " + sidecar.digest_hex + " != recomputed " + recomputed.hex();
    return report;
  }

  report.status = VerificationStatus::Verified;
  report.detail = report.warnings.empty() ? "endorsed by " + report.endorser->display_name
                                          : "endorsed by " + report.endorser->display_name +
                                                " (warning: " + report.warnings.front() + ")";
  return report;
}

}  // namespace

VerificationReport verify_endorsement(const SidecarDocument& sidecar, const MediaAsset& media,
                                      const TrustStore& trust) {
  try {
    return verify_impl(sidecar, media, &trust);
  } catch (const std::exception& e) {
    VerificationReport report;
    report.status = VerificationStatus::MalformedSidecar;
    report.asset_locator = media.locator;
    report.detail = e.what();
    return report;
  }
}

VerificationReport verify_integrity(const SidecarDocument& sidecar, const MediaAsset& media) {
  try {
    return verify_impl(sidecar, media, nullptr);
  } catch (const std::exception& e) {
    VerificationReport report;
    report.status = VerificationStatus::MalformedSidecar;
    report.asset_locator = media.locator;
    report.detail = e.what();
    return report;
  }
}

SidecarDocument make_sidecar(const EndorsementMetadata& meta, const MediaAsset& media,
                             const PrivateKey& key, const Certificate& endorser_cert) {
  SidecarDocument doc;
  doc.metadata = meta;
  doc.digest_hex = compute_digest(meta, media).hex();
  doc.signature_b64 = sign_endorsement(meta, media, key).b64();
  doc.certificate_b64 = base64_encode(endorser_cert.der());
  return doc;
}

std::string_view to_string(VerificationStatus status) {
  switch (status) {
    case VerificationStatus::Verified: return "Verified";
    case VerificationStatus::FailedDigestMismatch: return "FailedDigestMismatch";
    case VerificationStatus::FailedSignatureInvalid: return "FailedSignatureInvalid";
    case VerificationStatus::UntrustedEndorser: return "UntrustedEndorser";
    case VerificationStatus::MalformedSidecar: return "MalformedSidecar";
    case VerificationStatus::NoSidecar: return "NoSidecar";
  }
  return "Unknown";
}

}  // namespace mediacert
