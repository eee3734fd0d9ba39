#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mediacert/chunked.hpp"
#include "mediacert/document.hpp"
#include "mediacert/fetch.hpp"
#include "mediacert/pki.hpp"
#include "mediacert/report.hpp"

namespace mediacert {

/// Verifies a local asset against its sidecar (default: asset + ".xmp").
/// Throws Error(FileNotFound) only when the asset is missing; a missing
/// sidecar is NoSidecar and an unparsable one MalformedSidecar.
VerificationReport verify_file(const std::filesystem::path& asset,
                               const std::optional<std::filesystem::path>& sidecar,
                               const TrustStore& trust);

/// Parses `sidecar_text` and verifies it against `media`.
VerificationReport verify_sidecar_text(std::string_view sidecar_text, const MediaAsset& media,
                                       const TrustStore& trust);

struct StatusCounts {
  std::size_t verified = 0;
  std::size_t failed = 0;  // digest mismatch + invalid signature
  std::size_t no_sidecar = 0;
  std::size_t malformed = 0;
  std::size_t untrusted = 0;

  void add(VerificationStatus status);
  bool operator==(const StatusCounts&) const = default;
};

struct PageReport {
  std::string page_locator;
  std::vector<VerificationReport> entries;  // sorted by asset_locator
  StatusCounts summary;

  bool has_failure() const;
};

/// Fetches a page (http(s) URL or local path) and verifies every img/video
/// carrying x-media-cert. Unannotated elements never appear. Up to
/// `concurrency` assets are verified at once; the report does not depend on it.
/// Throws Error(PageUnreachable) if the page cannot be fetched and
/// Error(UnparsableHtml) if it cannot be scanned.
PageReport crawl_page(const std::string& page, const TrustStore& trust, std::size_t concurrency,
                      const FetchOptions& fetch_options = {});

struct ChunkStreamResult {
  std::vector<ChunkVerdict> verdicts;
  std::size_t peak_buffered_bytes = 0;  // read buffer + verifier carry
  std::uint64_t trailing_bytes = 0;
};

/// Reads `stream` in slices of `read_size` bytes and reports each chunk as
/// soon as its last byte arrives (through `on_verdict` and the result).
/// Throws Error(StreamTruncated) after reporting the completed chunks if the
/// stream ends early.
ChunkStreamResult verify_chunked_stream(std::istream& stream, const SidecarDocument& manifest,
                                        const TrustStore& trust,
                                        const std::function<void(const ChunkVerdict&)>& on_verdict = {},
                                        std::size_t read_size = std::size_t{64} << 10);

}  // namespace mediacert
