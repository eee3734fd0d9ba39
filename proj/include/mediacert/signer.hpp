#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mediacert/document.hpp"
#include "mediacert/metadata.hpp"
#include "mediacert/metadata_input.hpp"
#include "mediacert/pki.hpp"

namespace mediacert {

struct SignRequest {
  std::filesystem::path asset_path;
  EndorsementMetadata metadata;
  std::filesystem::path key_path;
  std::filesystem::path cert_chain_path;  // PEM; the first certificate is the endorser's
  std::optional<std::filesystem::path> output_path;  // default: asset + ".xmp"
  std::optional<std::size_t> chunk_size;              // >= kMinChunkSize
};

/// Endorser key and certificate, checked to belong together.
struct SigningMaterial {
  PrivateKey key;
  Certificate certificate;

  /// Throws FileNotFound, InvalidKey (also when the key does not match the
  /// certificate) or MalformedCertificate.
  static SigningMaterial load(const std::filesystem::path& key_path,
                              const std::filesystem::path& cert_path);
};

/// Signs the asset and writes its sidecar atomically; the asset itself is
/// never opened for writing. Delegates to sign_chunked when chunk_size is set.
/// Returns the sidecar path.
std::filesystem::path sign_asset(const SignRequest& request);

/// Chunk-manifest variant. Throws Error(EmptyMedia) for a zero-length asset
/// and Error(InvalidArgument) for a missing or too-small chunk size.
std::filesystem::path sign_chunked(const SignRequest& request);

/// In-memory signing used by sign_asset/sign_chunked and the batch signer.
SidecarDocument build_sidecar(const EndorsementMetadata& meta, ByteView media,
                              const SigningMaterial& material,
                              std::optional<std::size_t> chunk_size = std::nullopt);

enum class BatchOutcome { Signed, Skipped, Failed };

std::string_view to_string(BatchOutcome outcome);

struct BatchItem {
  std::filesystem::path asset;
  BatchOutcome outcome = BatchOutcome::Failed;
  std::string detail;
};

struct BatchRequest {
  std::filesystem::path directory;
  /// Shared metadata; a per-file "<asset>.meta.json" overrides it field by field.
  PartialMetadata shared;
  std::filesystem::path key_path;
  std::filesystem::path cert_chain_path;
  bool force = false;
  std::size_t jobs = 1;
  std::optional<std::size_t> chunk_size;
};

struct BatchSummary {
  std::vector<BatchItem> items;  // sorted by asset path
  std::size_t signed_count = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
};

/// True for files batch_sign treats as media (by extension).
bool is_media_file(const std::filesystem::path& path);

/// Signs every media file directly inside `directory`. Files whose sidecar
/// still verifies under the signing certificate are skipped unless `force`.
/// Throws Error(FileNotFound) if the directory is missing, or the key/cert
/// errors of SigningMaterial::load; per-file problems land in the summary.
BatchSummary batch_sign(const BatchRequest& request);

}  // namespace mediacert
