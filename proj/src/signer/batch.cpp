#include <algorithm>
#include <atomic>
#include <thread>

#include "mediacert/chunked.hpp"
#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/signer.hpp"

namespace mediacert {

namespace fs = std::filesystem;

std::string_view to_string(BatchOutcome outcome) {
  switch (outcome) {
    case BatchOutcome::Signed: return "signed";
    case BatchOutcome::Skipped: return "skipped";
    case BatchOutcome::Failed: return "failed";
  }
  return "failed";
}

bool is_media_file(const fs::path& path) {
  return media_kind_from_locator(path.filename().string()) != MediaKind::Other;
}

namespace {

bool sidecar_still_valid(const fs::path& sidecar, const Bytes& media, const Certificate& cert) {
  std::error_code ec;
  if (!fs::exists(sidecar, ec)) return false;
  try {
    const Bytes text = read_file(sidecar);
    const SidecarDocument doc = parse_sidecar(as_chars(text));
    if (doc.certificate_b64 != base64_encode(cert.der())) return false;
    MediaAsset asset{media, MediaKind::Other, sidecar.string()};
    return verify_integrity(doc, asset).status == VerificationStatus::Verified;
  } catch (const Error&) {
    return false;
  }
}

BatchItem sign_one(const fs::path& asset, const BatchRequest& request, const SigningMaterial& material) {
  BatchItem item{asset, BatchOutcome::Failed, {}};
  try {
    const Bytes media = read_file(asset);
    const fs::path sidecar = sidecar_path_for(asset);
    if (!request.force && sidecar_still_valid(sidecar, media, material.certificate)) {
      item.outcome = BatchOutcome::Skipped;
      item.detail = "sidecar already valid";
      return item;
    }
    PartialMetadata fields = request.shared;
    fs::path per_file = asset;
    per_file += ".meta.json";
    std::error_code ec;
    if (fs::exists(per_file, ec)) {
      fields = merge_partial(metadata_from_json(as_chars(read_file(per_file))), request.shared);
    }
    const EndorsementMetadata meta = normalize_metadata(resolve_metadata(fields, nullptr, nullptr));
    std::optional<std::size_t> chunk = request.chunk_size;
    if (chunk && media.empty()) chunk.reset();
    write_file_atomic(sidecar, serialize_sidecar(build_sidecar(meta, media, material, chunk)));
    item.outcome = BatchOutcome::Signed;
    item.detail = sidecar.filename().string();
  } catch (const std::exception& e) {
    item.outcome = BatchOutcome::Failed;
    item.detail = e.what();
  }
  return item;
}

}  // namespace

BatchSummary batch_sign(const BatchRequest& request) {
  std::error_code ec;
  if (!fs::is_directory(request.directory, ec)) {
    throw Error(Errc::FileNotFound, "directory " + request.directory.string());
  }
  if (request.chunk_size && *request.chunk_size < kMinChunkSize) {
    throw Error(Errc::InvalidArgument, "chunk size below minimum");
  }
  const SigningMaterial material = SigningMaterial::load(request.key_path, request.cert_chain_path);

  std::vector<fs::path> assets;
  for (const auto& entry : fs::directory_iterator(request.directory)) {
    // Dangling symlinks are kept so they surface as failures.
    if (entry.is_directory(ec)) continue;
    if (is_media_file(entry.path())) assets.push_back(entry.path());
  }
  std::sort(assets.begin(), assets.end());

  BatchSummary summary;
  summary.items.resize(assets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < assets.size();) {
      summary.items[i] = sign_one(assets[i], request, material);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(request.jobs, 1, std::max<std::size_t>(1, assets.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& item : summary.items) {
    switch (item.outcome) {
      case BatchOutcome::Signed: ++summary.signed_count; break;
      case BatchOutcome::Skipped: ++summary.skipped; break;
      case BatchOutcome::Failed: ++summary.failed; break;
    }
  }
  return summary;
}

}  // namespace mediacert
