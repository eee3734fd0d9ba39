#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mediacert/metadata.hpp"

namespace mediacert {

/// One signed slice of a large asset.
struct ChunkEntry {
  std::uint64_t index = 0;
  std::uint64_t byte_offset = 0;
  std::uint64_t byte_length = 0;
  std::string digest_hex;
  std::string signature_b64;

  bool operator==(const ChunkEntry&) const = default;
};

/// In-memory form of an XMP sidecar.
struct SidecarDocument {
  EndorsementMetadata metadata;
  std::string digest_hex;
  std::string signature_b64;
  std::string certificate_b64;
  std::optional<std::vector<ChunkEntry>> chunks;

  bool is_chunked() const noexcept { return chunks.has_value() && !chunks->empty(); }
  bool operator==(const SidecarDocument&) const = default;
};

}  // namespace mediacert
