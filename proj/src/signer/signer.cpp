#include "mediacert/signer.hpp"

#include "mediacert/chunked.hpp"
#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/sidecar.hpp"

namespace mediacert {

namespace fs = std::filesystem;

SigningMaterial SigningMaterial::load(const fs::path& key_path, const fs::path& cert_path) {
  PrivateKey key = PrivateKey::from_bytes(read_file(key_path));
  const Bytes cert_bytes = read_file(cert_path);
  const bool pem = as_chars(cert_bytes).find("-----BEGIN") != std::string_view::npos;
  Certificate cert = pem ? Certificate::from_pem(as_chars(cert_bytes)) : Certificate::from_der(cert_bytes);
  extract_endorser(cert.der());  // RSA + decodable check
  if (!(cert.public_key() == key.public_key())) {
    throw Error(Errc::InvalidKey, "private key does not match the endorser certificate");
  }
  return SigningMaterial{std::move(key), std::move(cert)};
}

SidecarDocument build_sidecar(const EndorsementMetadata& meta, ByteView media,
                              const SigningMaterial& material, std::optional<std::size_t> chunk_size) {
  MediaAsset asset;
  asset.bytes.assign(media.begin(), media.end());
  SidecarDocument doc = make_sidecar(meta, asset, material.key, material.certificate);
  if (chunk_size) doc.chunks = sign_chunks(meta, media, *chunk_size, material.key);
  return doc;
}

namespace {

fs::path sign_impl(const SignRequest& request, std::optional<std::size_t> chunk_size) {
  if (chunk_size && *chunk_size < kMinChunkSize) {
    throw Error(Errc::InvalidArgument, "chunk size must be at least " + std::to_string(kMinChunkSize) +
                                           " bytes");
  }
  const Bytes media = read_file(request.asset_path);
  if (chunk_size && media.empty()) {
    throw Error(Errc::EmptyMedia, request.asset_path.string() + " is empty");
  }
  const SigningMaterial material = SigningMaterial::load(request.key_path, request.cert_chain_path);
  const EndorsementMetadata meta = normalize_metadata(request.metadata);
  const SidecarDocument doc = build_sidecar(meta, media, material, chunk_size);
  const fs::path out = request.output_path.value_or(sidecar_path_for(request.asset_path));
  write_file_atomic(out, serialize_sidecar(doc));
  return out;
}

}  // namespace

fs::path sign_asset(const SignRequest& request) { return sign_impl(request, request.chunk_size); }

fs::path sign_chunked(const SignRequest& request) {
  if (!request.chunk_size) throw Error(Errc::InvalidArgument, "chunked signing needs a chunk size");
  return sign_impl(request, request.chunk_size);
}

}  // namespace mediacert
