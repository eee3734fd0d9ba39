#include <gtest/gtest.h>

#include <sstream>

#include "mediacert/chunked.hpp"
#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/metadata_input.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/signer.hpp"
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

class SignerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    key = dir / "endorser.key.pem";
    cert = dir / "endorser.chain.pem";
    write_text(key, shared_chain().endorser_key.to_pem());
    write_text(cert, shared_chain().endorser.pem() + shared_chain().root.pem());
  }

  SignRequest request_for(const fs::path& asset) const {
    SignRequest r;
    r.asset_path = asset;
    r.metadata = sample_metadata();
    r.key_path = key;
    r.cert_chain_path = cert;
    return r;
  }

  Errc error_of(const SignRequest& r) const {
    try {
      sign_asset(r);
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "sign_asset succeeded";
    return Errc::InvalidArgument;
  }

  TempDir dir;
  fs::path key, cert;
};

TEST_F(SignerTest, SidecarVerifiesAndMediaIsUntouched) {
  const fs::path asset = dir / "photo.bmp";
  const Bytes image = make_demo_image(1);
  write_bytes(asset, image);
  const auto before = fs::last_write_time(asset);
  const fs::path sidecar = sign_asset(request_for(asset));
  EXPECT_EQ(sidecar, dir / "photo.bmp.xmp");
  EXPECT_EQ(read_file(asset), image);
  EXPECT_EQ(fs::last_write_time(asset), before);
  const VerificationReport r = verify_file(asset, std::nullopt, trust_with_root());
  EXPECT_EQ(r.status, VerificationStatus::Verified) << r.detail;
  EXPECT_EQ(r.endorser->display_name, "Example News");
}

TEST_F(SignerTest, RerunIsByteIdentical) {
  const fs::path asset = dir / "photo.bmp";
  write_bytes(asset, make_demo_image(2));
  const std::string first = read_text(sign_asset(request_for(asset)));
  const std::string second = read_text(sign_asset(request_for(asset)));
  EXPECT_EQ(first, second);
}

TEST_F(SignerTest, ExplicitOutputPath) {
  const fs::path asset = dir / "photo.bmp";
  write_bytes(asset, make_demo_image(3));
  SignRequest r = request_for(asset);
  r.output_path = dir / "elsewhere.xmp";
  EXPECT_EQ(sign_asset(r), dir / "elsewhere.xmp");
  EXPECT_FALSE(fs::exists(dir / "photo.bmp.xmp"));
  EXPECT_EQ(verify_file(asset, dir / "elsewhere.xmp", trust_with_root()).status, VerificationStatus::Verified);
}

TEST_F(SignerTest, MissingAssetWritesNothing) {
  EXPECT_EQ(error_of(request_for(dir / "absent.jpg")), Errc::FileNotFound);
  EXPECT_FALSE(fs::exists(dir / "absent.jpg.xmp"));
}

TEST_F(SignerTest, KeyAndCertificateProblems) {
  const fs::path asset = dir / "photo.bmp";
  write_bytes(asset, make_demo_image(0));

  SignRequest missing_key = request_for(asset);
  missing_key.key_path = dir / "nope.pem";
  EXPECT_EQ(error_of(missing_key), Errc::FileNotFound);

  write_text(dir / "small.pem", PrivateKey::generate(1024).to_pem());
  SignRequest small = request_for(asset);
  small.key_path = dir / "small.pem";
  EXPECT_EQ(error_of(small), Errc::InvalidKey);

  write_text(dir / "other.pem", issue_demo_chain("Other").endorser_key.to_pem());
  SignRequest mismatched = request_for(asset);
  mismatched.key_path = dir / "other.pem";
  EXPECT_EQ(error_of(mismatched), Errc::InvalidKey);

  write_text(dir / "bad-cert.pem", "-----BEGIN CERTIFICATE-----\nAAAA\n-----END CERTIFICATE-----\n");
  SignRequest bad_cert = request_for(asset);
  bad_cert.cert_chain_path = dir / "bad-cert.pem";
  EXPECT_EQ(error_of(bad_cert), Errc::MalformedCertificate);
  EXPECT_FALSE(fs::exists(dir / "photo.bmp.xmp"));
}

TEST_F(SignerTest, UnwritableOutputIsIoError) {
  const fs::path asset = dir / "photo.bmp";
  write_bytes(asset, make_demo_image(0));
  SignRequest r = request_for(asset);
  r.output_path = dir / "no-such-dir" / "x.xmp";
  EXPECT_EQ(error_of(r), Errc::IoError);
}

TEST_F(SignerTest, MetadataIsNormalizedBeforeSigning) {
  const fs::path asset = dir / "photo.bmp";
  write_bytes(asset, make_demo_image(0));
  SignRequest r = request_for(asset);
  r.metadata.city = "  Orlando\n";
  sign_asset(r);
  const SidecarDocument doc = parse_sidecar(read_text(dir / "photo.bmp.xmp"));
  EXPECT_EQ(doc.metadata.city, "Orlando");
  EXPECT_EQ(verify_file(asset, std::nullopt, trust_with_root()).status, VerificationStatus::Verified);

  r.metadata.city = "bad\x01";
  EXPECT_EQ(error_of(r), Errc::InvalidArgument);
}

TEST_F(SignerTest, ChunkCountsFollowArithmetic) {
  constexpr std::size_t MiB = std::size_t{1} << 20;
  const fs::path asset = dir / "clip.bin";
  write_bytes(asset, make_demo_video(10 * MiB));
  SignRequest r = request_for(asset);
  r.chunk_size = MiB;
  SidecarDocument doc = parse_sidecar(read_text(sign_asset(r)));
  ASSERT_TRUE(doc.is_chunked());
  ASSERT_EQ(doc.chunks->size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ((*doc.chunks)[i].byte_offset, i * MiB);
    EXPECT_EQ((*doc.chunks)[i].byte_length, MiB);
  }
  EXPECT_EQ(verify_file(asset, std::nullopt, trust_with_root()).status, VerificationStatus::Verified);

  write_bytes(asset, make_demo_video(10 * MiB + 1));
  doc = parse_sidecar(read_text(sign_chunked(r)));
  ASSERT_EQ(doc.chunks->size(), 11u);
  EXPECT_EQ(doc.chunks->back().byte_offset, 10 * MiB);
  EXPECT_EQ(doc.chunks->back().byte_length, 1u);
}

TEST_F(SignerTest, ChunkedRejectsEmptyMediaAndTinyChunks) {
  const fs::path empty = dir / "empty.bin";
  write_bytes(empty, {});
  SignRequest r = request_for(empty);
  r.chunk_size = kMinChunkSize;
  EXPECT_EQ(error_of(r), Errc::EmptyMedia);

  const fs::path asset = dir / "clip.bin";
  write_bytes(asset, make_demo_video(1000));
  SignRequest tiny = request_for(asset);
  tiny.chunk_size = kMinChunkSize - 1;
  EXPECT_EQ(error_of(tiny), Errc::InvalidArgument);
  SignRequest none = request_for(asset);
  EXPECT_THROW(sign_chunked(none), Error);
}

TEST_F(SignerTest, EmptyMediaIsFineWithoutChunking) {
  const fs::path empty = dir / "empty.bin";
  write_bytes(empty, {});
  sign_asset(request_for(empty));
  EXPECT_EQ(verify_file(empty, std::nullopt, trust_with_root()).status, VerificationStatus::Verified);
}

class BatchTest : public SignerTest {
 protected:
  BatchRequest batch() const {
    BatchRequest b;
    b.directory = dir / "site";
    for (std::size_t i = 0; i < kMetadataFields.size(); ++i) b.shared[i] = *sample_metadata().fields()[i];
    b.key_path = key;
    b.cert_chain_path = cert;
    return b;
  }
  void populate() {
    fs::create_directories(dir / "site");
    for (int i = 0; i < 3; ++i) write_bytes(dir / "site" / ("img" + std::to_string(i) + ".bmp"), make_demo_image(i));
    write_text(dir / "site" / "notes.txt", "not media");
  }
};

TEST_F(BatchTest, SignsThenSkips) {
  populate();
  BatchSummary first = batch_sign(batch());
  EXPECT_EQ(first.signed_count, 3u);
  EXPECT_EQ(first.skipped, 0u);
  EXPECT_EQ(first.failed, 0u);
  ASSERT_EQ(first.items.size(), 3u);
  EXPECT_TRUE(std::is_sorted(first.items.begin(), first.items.end(),
                             [](const BatchItem& a, const BatchItem& b) { return a.asset < b.asset; }));
  for (const auto& item : first.items) {
    EXPECT_EQ(verify_file(item.asset, std::nullopt, trust_with_root()).status, VerificationStatus::Verified);
  }

  const BatchSummary second = batch_sign(batch());
  EXPECT_EQ(second.signed_count, 0u);
  EXPECT_EQ(second.skipped, 3u);

  BatchRequest forced = batch();
  forced.force = true;
  EXPECT_EQ(batch_sign(forced).signed_count, 3u);
}

TEST_F(BatchTest, ResignsStaleSidecars) {
  populate();
  batch_sign(batch());
  write_bytes(dir / "site" / "img1.bmp", make_demo_image(9));
  const BatchSummary again = batch_sign(batch());
  EXPECT_EQ(again.signed_count, 1u);
  EXPECT_EQ(again.skipped, 2u);
}

TEST_F(BatchTest, UnreadableFileIsCountedAsFailure) {
  fs::create_directories(dir / "site");
  write_bytes(dir / "site" / "a.jpg", make_demo_image(0));
  write_bytes(dir / "site" / "b.jpg", make_demo_image(1));
  fs::create_symlink(dir / "site" / "missing-target.jpg", dir / "site" / "c.jpg");
  const BatchSummary s = batch_sign(batch());
  EXPECT_EQ(s.signed_count, 2u);
  EXPECT_EQ(s.failed, 1u);
  ASSERT_EQ(s.items.size(), 3u);
  EXPECT_EQ(s.items[2].outcome, BatchOutcome::Failed);
  EXPECT_FALSE(s.items[2].detail.empty());
}

TEST_F(BatchTest, PerFileMetadataOverridesShared) {
  populate();
  write_text(dir / "site" / "img0.bmp.meta.json", R"({"headline": "Per-file headline"})");
  batch_sign(batch());
  EXPECT_EQ(parse_sidecar(read_text(dir / "site" / "img0.bmp.xmp")).metadata.headline, "Per-file headline");
  EXPECT_EQ(parse_sidecar(read_text(dir / "site" / "img1.bmp.xmp")).metadata.headline, "Headline");
}

TEST_F(BatchTest, MissingMetadataFailsPerFile) {
  populate();
  BatchRequest b = batch();
  b.shared[5].reset();
  write_text(dir / "site" / "img2.bmp.meta.json", R"({"headline": "Only here"})");
  const BatchSummary s = batch_sign(b);
  EXPECT_EQ(s.signed_count, 1u);
  EXPECT_EQ(s.failed, 2u);
}

TEST_F(BatchTest, ParallelMatchesSerial) {
  populate();
  BatchRequest parallel = batch();
  parallel.jobs = 4;
  const BatchSummary p = batch_sign(parallel);
  std::vector<std::string> parallel_text;
  for (const auto& item : p.items) parallel_text.push_back(read_text(sidecar_path_for(item.asset)));
  BatchRequest serial = batch();
  serial.force = true;
  const BatchSummary s = batch_sign(serial);
  ASSERT_EQ(s.items.size(), p.items.size());
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    EXPECT_EQ(s.items[i].asset, p.items[i].asset);
    EXPECT_EQ(read_text(sidecar_path_for(s.items[i].asset)), parallel_text[i]);
  }
}

TEST_F(BatchTest, MissingDirectory) {
  try {
    batch_sign(batch());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FileNotFound);
  }
}

TEST(IsMediaFile, ByExtension) {
  EXPECT_TRUE(is_media_file("a.JPG"));
  EXPECT_TRUE(is_media_file("b.mp4"));
  EXPECT_FALSE(is_media_file("a.jpg.xmp"));
  EXPECT_FALSE(is_media_file("a.jpg.meta.json"));
  EXPECT_FALSE(is_media_file("index.html"));
}

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](std::string_view name) -> std::optional<std::string> {
    const auto it = vars.find(std::string(name));
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

PartialMetadata all_flags(const EndorsementMetadata& m) {
  PartialMetadata p;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = *m.fields()[i];
  return p;
}

TEST(ResolveMetadata, FlagsBeatEnvironmentBeatPrompt) {
  PartialMetadata flags;
  flags[1] = "FlagCity";
  std::map<std::string, std::string> vars;
  for (const auto& f : kMetadataFields) vars[std::string(f.env)] = "env";
  std::istringstream in("prompted\n");
  std::ostringstream out;
  PromptIo io{in, out};
  const EndorsementMetadata m = resolve_metadata(flags, env_of(vars), &io);
  EXPECT_EQ(m.city, "FlagCity");
  EXPECT_EQ(m.region, "env");
  EXPECT_TRUE(out.str().empty());
}

TEST(ResolveMetadata, PromptsInFieldOrderForMissingOnly) {
  PartialMetadata flags;
  flags[2] = "FL";
  std::istringstream in("2020-01-01T00:00:00Z\nOrlando\nUS\nA. Photographer\nHeadline\nDesc.\n");
  std::ostringstream out;
  PromptIo io{in, out};
  const EndorsementMetadata m = resolve_metadata(flags, env_of({}), &io);
  EXPECT_EQ(m, sample_metadata());
  const std::string prompts = out.str();
  std::size_t last = 0;
  for (std::size_t i = 0; i < kMetadataFields.size(); ++i) {
    const auto at = prompts.find(kMetadataFields[i].prompt_label);
    if (i == 2) {
      EXPECT_EQ(at, std::string::npos);
      continue;
    }
    ASSERT_NE(at, std::string::npos) << kMetadataFields[i].prompt_label;
    EXPECT_GE(at, last);
    last = at;
  }
}

TEST(ResolveMetadata, InteractiveAndFlagModesSignIdentically) {
  std::istringstream in("2020-01-01T00:00:00Z\nOrlando\nFL\nUS\nA. Photographer\nHeadline\nDesc.\n");
  std::ostringstream out;
  PromptIo io{in, out};
  const EndorsementMetadata prompted = resolve_metadata({}, env_of({}), &io);
  const EndorsementMetadata flagged = resolve_metadata(all_flags(sample_metadata()), env_of({}), nullptr);
  EXPECT_EQ(prompted, flagged);
  const auto& chain = shared_chain();
  const MediaAsset media{make_demo_image(0), MediaKind::Image, "x.bmp"};
  EXPECT_EQ(serialize_sidecar(make_sidecar(prompted, media, chain.endorser_key, chain.endorser)),
            serialize_sidecar(make_sidecar(flagged, media, chain.endorser_key, chain.endorser)));
}

TEST(ResolveMetadata, MissingFieldsAreNamed) {
  PartialMetadata flags = all_flags(sample_metadata());
  flags[4].reset();
  flags[6].reset();
  try {
    resolve_metadata(flags, env_of({}), nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("creator"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("description"), std::string::npos) << e.what();
  }
}

TEST(ResolveMetadata, EmptyValueIsPresent) {
  PartialMetadata flags = all_flags(sample_metadata());
  flags[6] = "";
  EXPECT_EQ(resolve_metadata(flags, env_of({}), nullptr).description, "");
}

TEST(MetadataFromJson, ParsesKnownKeys) {
  const PartialMetadata p = metadata_from_json(R"({"city": "Orlando", "other": 1, "description": ""})");
  EXPECT_EQ(p[1], "Orlando");
  EXPECT_EQ(p[6], "");
  EXPECT_FALSE(p[0]);
  EXPECT_THROW(metadata_from_json("{"), Error);
  EXPECT_THROW(metadata_from_json(R"({"city": 5})"), Error);
}

TEST(MergePartial, PrimaryWins) {
  PartialMetadata a, b;
  a[0] = "a0";
  b[0] = "b0";
  b[1] = "b1";
  const PartialMetadata m = merge_partial(a, b);
  EXPECT_EQ(m[0], "a0");
  EXPECT_EQ(m[1], "b1");
  EXPECT_FALSE(m[2]);
}

}  // namespace
}  // namespace mediacert
