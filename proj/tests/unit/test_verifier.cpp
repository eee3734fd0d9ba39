#include <gtest/gtest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <sstream>
#include <thread>

#include "mediacert/chunked.hpp"
#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"
#include "mediacert/fetch.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/html.hpp"
#include "mediacert/report_json.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/verifier.hpp"
#include "test_support.hpp"

namespace mediacert {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::sample_metadata;
using testing::shared_chain;
using testing::TempDir;
using testing::trust_with_root;
using testing::write_bytes;
using testing::write_text;

void sign_into(const fs::path& asset, const Bytes& bytes) {
  write_bytes(asset, bytes);
  const auto& chain = shared_chain();
  const SidecarDocument doc = make_sidecar(sample_metadata(), MediaAsset{bytes, MediaKind::Image, asset.string()},
                                           chain.endorser_key, chain.endorser);
  write_text(sidecar_path_for(asset), serialize_sidecar(doc));
}

// valid.bmp (signed), tampered.bmp (signed, then modified), plain.bmp (no annotation).
fs::path make_page(const fs::path& root) {
  sign_into(root / "valid.bmp", make_demo_image(0));
  sign_into(root / "tampered.bmp", make_demo_image(1));
  Bytes changed = make_demo_image(1);
  changed[100] ^= 0x01;
  write_bytes(root / "tampered.bmp", changed);
  write_bytes(root / "plain.bmp", make_demo_image(2));
  write_text(root / "index.html",
             "<html><body>\n"
             "<img src=\"valid.bmp\" x-media-cert=\"valid.bmp.xmp\">\n"
             "<img src=\"plain.bmp\">\n"
             "<img src=\"tampered.bmp\" x-media-cert=\"tampered.bmp.xmp\">\n"
             "</body></html>\n");
  return root / "index.html";
}

TEST(VerifyFile, VerifiedReportCarriesIdentityAndMetadata) {
  TempDir dir;
  sign_into(dir / "a.bmp", make_demo_image(0));
  const VerificationReport r = verify_file(dir / "a.bmp", std::nullopt, trust_with_root());
  ASSERT_EQ(r.status, VerificationStatus::Verified);
  EXPECT_EQ(r.endorser->display_name, "Example News");
  EXPECT_EQ(*r.metadata, sample_metadata());
}

TEST(VerifyFile, MissingSidecarIsNoSidecar) {
  TempDir dir;
  write_bytes(dir / "a.bmp", make_demo_image(0));
  const VerificationReport r = verify_file(dir / "a.bmp", std::nullopt, trust_with_root());
  EXPECT_EQ(r.status, VerificationStatus::NoSidecar);
  EXPECT_FALSE(r.endorser);
  EXPECT_FALSE(r.metadata);
  EXPECT_FALSE(is_failure(r.status));
}

TEST(VerifyFile, TruncatedSidecarIsMalformed) {
  TempDir dir;
  sign_into(dir / "a.bmp", make_demo_image(0));
  const std::string text = read_text(dir / "a.bmp.xmp");
  write_text(dir / "a.bmp.xmp", text.substr(0, text.size() / 2));
  const VerificationReport r = verify_file(dir / "a.bmp", std::nullopt, trust_with_root());
  EXPECT_EQ(r.status, VerificationStatus::MalformedSidecar);
  EXPECT_FALSE(r.endorser);
}

TEST(VerifyFile, MissingAssetThrows) {
  TempDir dir;
  try {
    verify_file(dir / "gone.bmp", std::nullopt, trust_with_root());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FileNotFound);
  }
}

TEST(VerifyFile, ChunkedSidecarVerifiesWholeFile) {
  TempDir dir;
  const Bytes video = make_demo_video(3 * kMinChunkSize + 5);
  write_bytes(dir / "v.bin", video);
  const auto& chain = shared_chain();
  SidecarDocument doc =
      make_sidecar(sample_metadata(), MediaAsset{video, MediaKind::Video, "v.bin"}, chain.endorser_key, chain.endorser);
  doc.chunks = sign_chunks(sample_metadata(), video, kMinChunkSize, chain.endorser_key);
  write_text(dir / "v.bin.xmp", serialize_sidecar(doc));
  EXPECT_EQ(verify_file(dir / "v.bin", std::nullopt, trust_with_root()).status, VerificationStatus::Verified);
}

TEST(CrawlPage, LocalPageReportsAnnotatedElementsOnly) {
  TempDir dir;
  const fs::path page = make_page(dir.path());
  const PageReport report = crawl_page(page.string(), trust_with_root(), 4);
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[0].asset_locator, (dir / "tampered.bmp").string());
  EXPECT_EQ(report.entries[0].status, VerificationStatus::FailedSignatureInvalid);
  EXPECT_EQ(report.entries[1].asset_locator, (dir / "valid.bmp").string());
  EXPECT_EQ(report.entries[1].status, VerificationStatus::Verified);
  EXPECT_EQ(report.summary.verified, 1u);
  EXPECT_EQ(report.summary.failed, 1u);
  EXPECT_TRUE(report.has_failure());
  for (const auto& e : report.entries) EXPECT_EQ(e.asset_locator.find("plain"), std::string::npos);
}

TEST(CrawlPage, ZeroAnnotatedElements) {
  TempDir dir;
  write_text(dir / "index.html", "<img src=\"a.bmp\"><video src=\"b.mp4\"></video>");
  const PageReport report = crawl_page((dir / "index.html").string(), trust_with_root(), 2);
  EXPECT_TRUE(report.entries.empty());
  EXPECT_EQ(report.summary, StatusCounts{});
  EXPECT_FALSE(report.has_failure());
}

TEST(CrawlPage, UnreachablePage) {
  try {
    crawl_page("/definitely/not/here.html", trust_with_root(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PageUnreachable);
  }
}

TEST(CrawlPage, ReportIndependentOfConcurrency) {
  TempDir dir;
  const fs::path page = make_page(dir.path());
  const auto one = to_json(crawl_page(page.string(), trust_with_root(), 1));
  const auto eight = to_json(crawl_page(page.string(), trust_with_root(), 8));
  EXPECT_EQ(one.dump(), eight.dump());
}

class HttpCrawl : public ::testing::Test {
 protected:
  void SetUp() override { page = make_page(dir.path()); }
  TempDir dir;
  fs::path page;
};

TEST_F(HttpCrawl, MatchesLocalCrawlAndHonoursTamperList) {
  DemoServer server(ServeOptions{dir.path(), "127.0.0.1", 0, {}, false});
  const PageReport report = crawl_page(server.base_url() + "/index.html", trust_with_root(), 8);
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[0].asset_locator, server.base_url() + "/tampered.bmp");
  EXPECT_EQ(report.entries[0].status, VerificationStatus::FailedSignatureInvalid);
  EXPECT_EQ(report.entries[1].status, VerificationStatus::Verified);

  DemoServer tampering(ServeOptions{dir.path(), "127.0.0.1", 0, {"valid.bmp"}, false});
  const PageReport both_bad = crawl_page(tampering.base_url() + "/index.html", trust_with_root(), 8);
  EXPECT_EQ(both_bad.summary.failed, 2u);
}

TEST_F(HttpCrawl, MissingSidecarOverHttpIsNoSidecar) {
  fs::remove(dir / "valid.bmp.xmp");
  DemoServer server(ServeOptions{dir.path(), "127.0.0.1", 0, {}, false});
  const PageReport report = crawl_page(server.base_url() + "/index.html", trust_with_root(), 2);
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[1].status, VerificationStatus::NoSidecar);
  EXPECT_EQ(report.summary.no_sidecar, 1u);
}

TEST_F(HttpCrawl, MissingAssetIsFetchError) {
  fs::remove(dir / "valid.bmp");
  DemoServer server(ServeOptions{dir.path(), "127.0.0.1", 0, {}, false});
  const PageReport report = crawl_page(server.base_url() + "/index.html", trust_with_root(), 2);
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[1].status, VerificationStatus::NoSidecar);
  EXPECT_EQ(report.entries[1].detail.rfind("FetchError:", 0), 0u) << report.entries[1].detail;
}

TEST_F(HttpCrawl, WorksOverTls) {
  DemoServer server(ServeOptions{dir.path(), "127.0.0.1", 0, {}, true});
  FetchOptions options;
  options.ca_file = server.tls_ca_file();
  ASSERT_EQ(server.base_url().rfind("https://", 0), 0u);
  const PageReport report = crawl_page(server.base_url() + "/index.html", trust_with_root(), 2, options);
  EXPECT_EQ(report.summary.verified, 1u);
  EXPECT_EQ(report.summary.failed, 1u);

  EXPECT_THROW(crawl_page(server.base_url() + "/index.html", trust_with_root(), 2), Error);
}

TEST(Fetch, FollowsRedirectsUpToLimit) {
  httplib::Server server;
  server.Get(R"(/hop/(\d+))", [](const httplib::Request& req, httplib::Response& res) {
    const int n = std::stoi(req.matches[1]);
    if (n == 0) {
      res.set_content("landed", "text/plain");
    } else {
      res.set_redirect("/hop/" + std::to_string(n - 1));
    }
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::jthread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  const FetchResult five = fetch(base + "/hop/5");
  EXPECT_TRUE(five.ok) << five.error;
  EXPECT_EQ(std::string(as_chars(five.body)), "landed");
  EXPECT_EQ(five.final_locator, base + "/hop/0");

  const FetchResult six = fetch(base + "/hop/6");
  EXPECT_FALSE(six.ok);
  EXPECT_FALSE(six.not_found);

  const FetchResult missing = fetch(base + "/nothing");
  EXPECT_FALSE(missing.ok);
  EXPECT_TRUE(missing.not_found);
  EXPECT_EQ(missing.status, 404);
  server.stop();
}

TEST(Fetch, LocalFilesAndFileUrls) {
  TempDir dir;
  write_text(dir / "x.txt", "hello");
  EXPECT_TRUE(fetch((dir / "x.txt").string()).ok);
  EXPECT_TRUE(fetch("file://" + (dir / "x.txt").string()).ok);
  const FetchResult missing = fetch((dir / "y.txt").string());
  EXPECT_FALSE(missing.ok);
  EXPECT_TRUE(missing.not_found);
  const FetchResult refused = fetch("http://127.0.0.1:1/x");
  EXPECT_FALSE(refused.ok);
  EXPECT_FALSE(refused.not_found);
}

class ChunkedStream : public ::testing::Test {
 protected:
  static constexpr std::size_t kChunk = std::size_t{1} << 20;
  static void SetUpTestSuite() {
    media = new Bytes(make_demo_video(10 * kChunk, 3));
    const auto& chain = shared_chain();
    manifest = new SidecarDocument(make_sidecar(sample_metadata(), MediaAsset{*media, MediaKind::Video, "v.bin"},
                                                chain.endorser_key, chain.endorser));
    manifest->chunks = sign_chunks(sample_metadata(), *media, kChunk, chain.endorser_key);
  }
  static void TearDownTestSuite() {
    delete media;
    delete manifest;
  }
  static Bytes* media;
  static SidecarDocument* manifest;
};
Bytes* ChunkedStream::media = nullptr;
SidecarDocument* ChunkedStream::manifest = nullptr;

TEST_F(ChunkedStream, VerdictsAreIncrementalAndBounded) {
  testing::CountingStreamBuf buf(*media);
  std::istream in(&buf);
  std::vector<std::size_t> consumed_at;
  const ChunkStreamResult result = verify_chunked_stream(
      in, *manifest, trust_with_root(), [&](const ChunkVerdict&) { consumed_at.push_back(buf.consumed()); });
  ASSERT_EQ(result.verdicts.size(), 10u);
  ASSERT_EQ(consumed_at.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ(result.verdicts[k].index, k);
    EXPECT_EQ(result.verdicts[k].status, VerificationStatus::Verified);
    // Verdict k is emitted before the stream has moved past chunk k's end by more than one read.
    EXPECT_LE(consumed_at[k], (k + 1) * kChunk + (std::size_t{64} << 10)) << k;
  }
  EXPECT_LE(result.peak_buffered_bytes, 2 * kChunk);
  EXPECT_EQ(result.trailing_bytes, 0u);
}

TEST_F(ChunkedStream, TamperedChunkThreeFailsAlone) {
  Bytes tampered = *media;
  tampered[3 * kChunk + 12345] ^= 0x80;
  std::istringstream in(std::string(as_chars(tampered)));
  const ChunkStreamResult result = verify_chunked_stream(in, *manifest, trust_with_root());
  ASSERT_EQ(result.verdicts.size(), 10u);
  for (const auto& v : result.verdicts) {
    EXPECT_EQ(v.status == VerificationStatus::Verified, v.index != 3) << v.index;
  }
}

TEST_F(ChunkedStream, SwappedSignaturesFlagBothChunks) {
  SidecarDocument swapped = *manifest;
  std::swap((*swapped.chunks)[2].signature_b64, (*swapped.chunks)[3].signature_b64);
  std::istringstream in(std::string(as_chars(*media)));
  const ChunkStreamResult result = verify_chunked_stream(in, swapped, trust_with_root());
  for (const auto& v : result.verdicts) {
    EXPECT_EQ(v.status == VerificationStatus::Verified, v.index != 2 && v.index != 3) << v.index;
  }
}

TEST_F(ChunkedStream, CutAfterSevenChunks) {
  std::istringstream in(std::string(as_chars(ByteView(*media).first(7 * kChunk + 100))));
  std::vector<ChunkVerdict> seen;
  try {
    verify_chunked_stream(in, *manifest, trust_with_root(), [&](const ChunkVerdict& v) { seen.push_back(v); });
    FAIL() << "expected StreamTruncated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::StreamTruncated);
  }
  ASSERT_EQ(seen.size(), 7u);
  for (const auto& v : seen) EXPECT_EQ(v.status, VerificationStatus::Verified);
}

TEST(ReportJson, SchemaAndNulls) {
  VerificationReport ok;
  ok.status = VerificationStatus::Verified;
  ok.asset_locator = "a.bmp";
  ok.endorser = extract_endorser(shared_chain().endorser.der());
  ok.metadata = sample_metadata();
  const auto j = to_json(ok);
  EXPECT_EQ(j["asset"], "a.bmp");
  EXPECT_EQ(j["status"], "Verified");
  EXPECT_EQ(j["endorser"], "Example News");
  EXPECT_EQ(j["metadata"]["dateTime"], "2020-01-01T00:00:00Z");
  EXPECT_EQ(j["metadata"]["description"], "Desc.");
  EXPECT_TRUE(j["warnings"].is_array());

  VerificationReport bad = ok;
  bad.status = VerificationStatus::FailedSignatureInvalid;
  const auto jb = to_json(bad);
  EXPECT_TRUE(jb["endorser"].is_null());
  EXPECT_TRUE(jb["metadata"].is_null());

  PageReport page;
  page.page_locator = "p.html";
  page.entries = {ok, bad};
  page.summary.add(ok.status);
  page.summary.add(bad.status);
  const auto jp = to_json(page);
  EXPECT_EQ(jp["summary"]["verified"], 1);
  EXPECT_EQ(jp["summary"]["failed"], 1);
  EXPECT_EQ(jp["summary"]["noSidecar"], 0);
  EXPECT_EQ(jp["entries"].size(), 2u);
}

TEST(ReportText, ShowsEndorserAndFields) {
  VerificationReport ok;
  ok.status = VerificationStatus::Verified;
  ok.asset_locator = "a.bmp";
  ok.endorser = extract_endorser(shared_chain().endorser.der());
  ok.metadata = sample_metadata();
  const std::string text = render_text(ok);
  for (const char* needle : {"Example News", "2020-01-01T00:00:00Z", "Orlando", "FL", "US", "A. Photographer", "Desc."}) {
    EXPECT_NE(text.find(needle), std::string::npos) << needle;
  }
}

TEST(StatusCounts, Tallies) {
  StatusCounts c;
  for (auto s : {VerificationStatus::Verified, VerificationStatus::FailedDigestMismatch,
                 VerificationStatus::FailedSignatureInvalid, VerificationStatus::UntrustedEndorser,
                 VerificationStatus::MalformedSidecar, VerificationStatus::NoSidecar}) {
    c.add(s);
  }
  EXPECT_EQ(c, (StatusCounts{1, 2, 1, 1, 1}));
}

}  // namespace
}  // namespace mediacert
