#include "mediacert/chunked.hpp"

#include "crypto_internal.hpp"
#include "mediacert/error.hpp"

namespace mediacert {

namespace {

void emit_chunk(const EndorsementMetadata& meta, std::uint64_t index, ByteView chunk,
                const PreimageStream::Sink& sink) {
  PreimageStream stream(meta, index, sink);
  stream.update(chunk);
  stream.finish();
}

}  // namespace

CanonicalMessage chunk_message(const EndorsementMetadata& meta, std::uint64_t index,
                               ByteView chunk) {
  CanonicalMessage msg;
  emit_chunk(meta, index, chunk,
             [&](ByteView b) { msg.bytes.insert(msg.bytes.end(), b.begin(), b.end()); });
  return msg;
}

Digest compute_chunk_digest(const EndorsementMetadata& meta, std::uint64_t index,
                            ByteView chunk) {
  detail::Sha256 sha;
  emit_chunk(meta, index, chunk, [&](ByteView b) { sha.update(b); });
  return sha.finish();
}

SignatureValue sign_chunk(const EndorsementMetadata& meta, std::uint64_t index, ByteView chunk,
                          const PrivateKey& key) {
  return detail::sign_preimage(
      key, [&](PreimageStream::Sink sink) { emit_chunk(meta, index, chunk, sink); });
}

std::vector<ChunkEntry> sign_chunks(const EndorsementMetadata& meta, ByteView media,
                                    std::size_t chunk_size, const PrivateKey& key) {
  if (media.empty()) throw Error(Errc::EmptyMedia, "chunked signing needs non-empty media");
  if (chunk_size == 0) throw Error(Errc::InvalidArgument, "chunk size must be positive");
  std::vector<ChunkEntry> out;
  out.reserve((media.size() + chunk_size - 1) / chunk_size);
  for (std::size_t offset = 0, index = 0; offset < media.size(); offset += chunk_size, ++index) {
    const ByteView chunk = media.subspan(offset, std::min(chunk_size, media.size() - offset));
    ChunkEntry entry;
    entry.index = index;
    entry.byte_offset = offset;
    entry.byte_length = chunk.size();
    entry.digest_hex = compute_chunk_digest(meta, index, chunk).hex();
    entry.signature_b64 = sign_chunk(meta, index, chunk, key).b64();
    out.push_back(std::move(entry));
  }
  return out;
}

struct ChunkStreamVerifier::State {
  EndorsementMetadata metadata;
  std::vector<ChunkEntry> chunks;
  VerificationReport identity;
  bool usable = false;

  std::size_t current = 0;
  std::uint64_t consumed_in_chunk = 0;
  std::uint64_t trailing = 0;

  std::unique_ptr<detail::SignatureCheck> check;
  std::unique_ptr<detail::Sha256> sha;
  std::unique_ptr<PreimageStream> stream;

  void begin_chunk() {
    consumed_in_chunk = 0;
    if (current >= chunks.size()) {
      stream.reset();
      return;
    }
    if (usable) {
      check = std::make_unique<detail::SignatureCheck>(identity.endorser->public_key.get());
      sha = std::make_unique<detail::Sha256>();
      stream = std::make_unique<PreimageStream>(metadata, chunks[current].index, [this](ByteView b) {
        check->update(b);
        sha->update(b);
      });
    }
  }

  ChunkVerdict finish_chunk() {
    const ChunkEntry& entry = chunks[current];
    ChunkVerdict verdict{entry.index, entry.byte_offset, entry.byte_length, identity.status,
                         identity.detail};
    if (usable) {
      stream->finish();
      const Digest recomputed = sha->finish();
      Bytes signature;
      bool decodable = true;
      try {
        signature = base64_decode(entry.signature_b64);
      } catch (const Error&) {
        decodable = false;
      }
      if (!decodable) {
        verdict.status = VerificationStatus::MalformedSidecar;
        verdict.detail = "chunk signature is not valid Base64";
      } else if (!check->finish(signature)) {
        verdict.status = VerificationStatus::FailedSignatureInvalid;
        verdict.detail = "chunk signature does not match chunk bytes";
      } else if (recomputed.hex() != entry.digest_hex) {
        verdict.status = VerificationStatus::FailedDigestMismatch;
        verdict.detail = "chunk digest mismatch";
      } else {
        verdict.status = VerificationStatus::Verified;
        verdict.detail = "chunk endorsed by " + identity.endorser->display_name;
      }
    }
    ++current;
    begin_chunk();
    return verdict;
  }
};

ChunkStreamVerifier::ChunkStreamVerifier(const SidecarDocument& manifest, const TrustStore& trust)
    : state_(std::make_unique<State>()) {
  if (!manifest.is_chunked()) throw Error(Errc::InvalidArgument, "manifest has no chunks");
  std::uint64_t expected_offset = 0;
  for (std::size_t i = 0; i < manifest.chunks->size(); ++i) {
    const ChunkEntry& c = (*manifest.chunks)[i];
    if (c.index != i || c.byte_offset != expected_offset || c.byte_length == 0) {
      throw Error(Errc::MalformedSidecar, "chunk " + std::to_string(i) + " is not contiguous");
    }
    expected_offset += c.byte_length;
  }
  state_->metadata = manifest.metadata;
  state_->chunks = *manifest.chunks;

  VerificationReport& id = state_->identity;
  id.metadata = manifest.metadata;
  try {
    id.endorser = extract_endorser(base64_decode(manifest.certificate_b64));
    const ChainCheck chain =
        check_chain(Certificate::from_der(id.endorser->certificate_der), trust);
    if (!chain.trusted) {
      id.status = VerificationStatus::UntrustedEndorser;
      id.detail = chain.detail;
    } else {
      id.status = VerificationStatus::Verified;
      if (chain.expiry_warning) id.warnings.push_back(chain.detail);
      state_->usable = true;
    }
  } catch (const Error& e) {
    id.status = VerificationStatus::MalformedSidecar;
    id.detail = std::string("embedded certificate: ") + e.what();
  }
  state_->begin_chunk();
}

ChunkStreamVerifier::~ChunkStreamVerifier() = default;
ChunkStreamVerifier::ChunkStreamVerifier(ChunkStreamVerifier&&) noexcept = default;
ChunkStreamVerifier& ChunkStreamVerifier::operator=(ChunkStreamVerifier&&) noexcept = default;

std::vector<ChunkVerdict> ChunkStreamVerifier::feed(ByteView data) {
  std::vector<ChunkVerdict> out;
  State& s = *state_;
  while (!data.empty()) {
    if (s.current >= s.chunks.size()) {
      s.trailing += data.size();
      break;
    }
    const std::uint64_t remaining = s.chunks[s.current].byte_length - s.consumed_in_chunk;
    const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, data.size()));
    if (s.stream) s.stream->update(data.first(take));
    s.consumed_in_chunk += take;
    data = data.subspan(take);
    if (s.consumed_in_chunk == s.chunks[s.current].byte_length) out.push_back(s.finish_chunk());
  }
  return out;
}

void ChunkStreamVerifier::finish() const {
  if (!done()) {
    throw Error(Errc::StreamTruncated, "stream ended after " + std::to_string(state_->current) +
                                           " of " + std::to_string(state_->chunks.size()) +
                                           " chunks");
  }
}

bool ChunkStreamVerifier::done() const noexcept { return state_->current >= state_->chunks.size(); }
std::size_t ChunkStreamVerifier::chunk_count() const noexcept { return state_->chunks.size(); }
std::size_t ChunkStreamVerifier::verdicts_emitted() const noexcept { return state_->current; }
std::uint64_t ChunkStreamVerifier::trailing_bytes() const noexcept { return state_->trailing; }
std::size_t ChunkStreamVerifier::buffered_bytes() const noexcept {
  return state_->stream ? state_->stream->buffered() : 0;
}
const VerificationReport& ChunkStreamVerifier::identity_report() const noexcept {
  return state_->identity;
}

}  // namespace mediacert
