#include "mediacert/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <thread>

#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/html.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/url.hpp"

namespace mediacert {

namespace fs = std::filesystem;

void StatusCounts::add(VerificationStatus status) {
  switch (status) {
    case VerificationStatus::Verified: ++verified; break;
    case VerificationStatus::FailedDigestMismatch:
    case VerificationStatus::FailedSignatureInvalid: ++failed; break;
    case VerificationStatus::UntrustedEndorser: ++untrusted; break;
    case VerificationStatus::MalformedSidecar: ++malformed; break;
    case VerificationStatus::NoSidecar: ++no_sidecar; break;
  }
}

bool PageReport::has_failure() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const VerificationReport& r) { return is_failure(r.status); });
}

namespace {

VerificationReport no_sidecar(std::string locator, std::string detail) {
  VerificationReport r;
  r.status = VerificationStatus::NoSidecar;
  r.asset_locator = std::move(locator);
  r.detail = std::move(detail);
  return r;
}

}  // namespace

VerificationReport verify_sidecar_text(std::string_view sidecar_text, const MediaAsset& media,
                                       const TrustStore& trust) {
  SidecarDocument doc;
  try {
    doc = parse_sidecar(sidecar_text);
  } catch (const Error& e) {
    VerificationReport r;
    r.status = VerificationStatus::MalformedSidecar;
    r.asset_locator = media.locator;
    r.detail = e.what();
    return r;
  }
  return verify_endorsement(doc, media, trust);
}

VerificationReport verify_file(const fs::path& asset, const std::optional<fs::path>& sidecar,
                               const TrustStore& trust) {
  MediaAsset media;
  media.bytes = read_file(asset);
  media.locator = asset.string();
  media.kind = media_kind_from_locator(media.locator);
  const fs::path sidecar_path = sidecar.value_or(sidecar_path_for(asset));
  std::error_code ec;
  if (!fs::exists(sidecar_path, ec)) return no_sidecar(media.locator, "no sidecar at " + sidecar_path.string());
  Bytes text;
  try {
    text = read_file(sidecar_path);
  } catch (const Error& e) {
    VerificationReport r;
    r.status = VerificationStatus::MalformedSidecar;
    r.asset_locator = media.locator;
    r.detail = e.what();
    return r;
  }
  return verify_sidecar_text(as_chars(text), media, trust);
}

namespace {

struct CrawlTask {
  std::size_t order = 0;
  std::string asset_url;
  std::string sidecar_url;
};

VerificationReport run_task(const CrawlTask& task, const TrustStore& trust, const FetchOptions& options) {
  if (task.asset_url.empty()) return no_sidecar("", "annotated element has no src");
  const FetchResult sidecar = fetch(task.sidecar_url, options);
  if (!sidecar.ok) {
    return no_sidecar(task.asset_url, sidecar.not_found
                                          ? "sidecar not found: " + task.sidecar_url
                                          : "FetchError: sidecar " + task.sidecar_url + ": " + sidecar.error);
  }
  const FetchResult asset = fetch(task.asset_url, options);
  if (!asset.ok) return no_sidecar(task.asset_url, "FetchError: asset " + task.asset_url + ": " + asset.error);
  MediaAsset media{asset.body, media_kind_from_locator(task.asset_url), task.asset_url};
  return verify_sidecar_text(as_chars(sidecar.body), media, trust);
}

}  // namespace

PageReport crawl_page(const std::string& page, const TrustStore& trust, std::size_t concurrency,
                      const FetchOptions& fetch_options) {
  const FetchResult fetched = fetch(page, fetch_options);
  if (!fetched.ok) throw Error(Errc::PageUnreachable, page + ": " + fetched.error);
  const std::string base = fetched.final_locator.empty() ? page : fetched.final_locator;

  std::vector<CrawlTask> tasks;
  for (const MediaElement& el : find_media_elements(as_chars(fetched.body))) {
    if (!el.cert) continue;
    CrawlTask task;
    task.order = tasks.size();
    task.asset_url = el.src.empty() ? "" : resolve_reference(base, el.src);
    task.sidecar_url = resolve_reference(base, *el.cert);
    tasks.push_back(std::move(task));
  }

  PageReport report;
  report.page_locator = page;
  report.entries.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      report.entries[i] = run_task(tasks[i], trust, fetch_options);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(concurrency, 1, std::max<std::size_t>(1, tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  // entries[i] came from tasks[i]; stable_sort keeps document order for ties.
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const VerificationReport& a, const VerificationReport& b) {
                     return a.asset_locator < b.asset_locator;
                   });
  for (const auto& e : report.entries) report.summary.add(e.status);
  return report;
}

ChunkStreamResult verify_chunked_stream(std::istream& stream, const SidecarDocument& manifest,
                                        const TrustStore& trust,
                                        const std::function<void(const ChunkVerdict&)>& on_verdict,
                                        std::size_t read_size) {
  ChunkStreamVerifier verifier(manifest, trust);
  ChunkStreamResult result;
  std::vector<char> buffer(std::max<std::size_t>(read_size, 1));
  while (!verifier.done() && stream) {
    stream.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<std::size_t>(stream.gcount());
    if (got == 0) break;
    result.peak_buffered_bytes = std::max(result.peak_buffered_bytes, got + verifier.buffered_bytes());
    const ByteView slice(reinterpret_cast<const std::uint8_t*>(buffer.data()), got);
    for (ChunkVerdict& v : verifier.feed(slice)) {
      if (on_verdict) on_verdict(v);
      result.verdicts.push_back(std::move(v));
    }
    result.peak_buffered_bytes = std::max(result.peak_buffered_bytes, got + verifier.buffered_bytes());
  }
  verifier.finish();
  // Count, but do not retain, anything after the last chunk.
  while (stream) {
    stream.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    result.trailing_bytes += static_cast<std::uint64_t>(stream.gcount());
  }
  result.trailing_bytes += verifier.trailing_bytes();
  return result;
}

}  // namespace mediacert
