#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mediacert/bytes.hpp"
#include "mediacert/document.hpp"
#include "mediacert/endorsement.hpp"
#include "mediacert/pki.hpp"
#include "mediacert/report.hpp"

namespace mediacert {

inline constexpr std::size_t kDefaultChunkSize = std::size_t{1} << 20;
inline constexpr std::size_t kMinChunkSize = std::size_t{64} << 10;

/// Preimage of one chunk: the seven fields, decimal index + LF, Base64(chunk).
CanonicalMessage chunk_message(const EndorsementMetadata& meta, std::uint64_t index, ByteView chunk);
Digest compute_chunk_digest(const EndorsementMetadata& meta, std::uint64_t index, ByteView chunk);
SignatureValue sign_chunk(const EndorsementMetadata& meta, std::uint64_t index, ByteView chunk,
                          const PrivateKey& key);

/// Splits `media` into ceil(len / chunk_size) contiguous chunks and signs each.
/// Throws Error(EmptyMedia) for empty media, Error(InvalidArgument) for a zero
/// chunk size.
std::vector<ChunkEntry> sign_chunks(const EndorsementMetadata& meta, ByteView media,
                                    std::size_t chunk_size, const PrivateKey& key);

struct ChunkVerdict {
  std::uint64_t index = 0;
  std::uint64_t byte_offset = 0;
  std::uint64_t byte_length = 0;
  VerificationStatus status = VerificationStatus::MalformedSidecar;
  std::string detail;
};

/// Incremental verifier for a chunk manifest. Media bytes are consumed as they
/// arrive and never retained: only up to two Base64 carry bytes are held, so a
/// verdict for chunk k is available the moment its last byte is fed.
class ChunkStreamVerifier {
 public:
  ChunkStreamVerifier(const SidecarDocument& manifest, const TrustStore& trust);
  ~ChunkStreamVerifier();
  ChunkStreamVerifier(ChunkStreamVerifier&&) noexcept;
  ChunkStreamVerifier& operator=(ChunkStreamVerifier&&) noexcept;

  /// Returns the verdicts completed by this slice, in index order.
  std::vector<ChunkVerdict> feed(ByteView data);
  /// Throws Error(StreamTruncated) if chunks remain unverified.
  void finish() const;

  bool done() const noexcept;
  std::size_t chunk_count() const noexcept;
  std::size_t verdicts_emitted() const noexcept;
  std::uint64_t trailing_bytes() const noexcept;
  /// Bytes held internally between feed() calls.
  std::size_t buffered_bytes() const noexcept;
  /// Result of the one-time identity + trust check for the manifest.
  const VerificationReport& identity_report() const noexcept;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace mediacert
