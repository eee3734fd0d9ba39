#include <random>

#include "mediacert/chunked.hpp"
#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/html.hpp"
#include "mediacert/pki.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/signer.hpp"

namespace mediacert {

namespace fs = std::filesystem;

namespace {

void put_le(Bytes& out, std::uint32_t value, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

EndorsementMetadata demo_metadata(std::string headline, std::string description) {
  return {"2020-01-01T12:00:00Z", "Orlando", "FL", "US", "A. Photographer", std::move(headline),
          std::move(description)};
}

}  // namespace

Bytes make_demo_image(int variant, int width, int height) {
  const std::uint32_t row = (static_cast<std::uint32_t>(width) * 3 + 3) & ~3u;
  const std::uint32_t pixels = row * static_cast<std::uint32_t>(height);
  Bytes out;
  out.reserve(54 + pixels);
  out.push_back('B');
  out.push_back('M');
  put_le(out, 54 + pixels, 4);
  put_le(out, 0, 4);
  put_le(out, 54, 4);
  put_le(out, 40, 4);  // BITMAPINFOHEADER
  put_le(out, static_cast<std::uint32_t>(width), 4);
  put_le(out, static_cast<std::uint32_t>(height), 4);
  put_le(out, 1, 2);
  put_le(out, 24, 2);
  put_le(out, 0, 4);
  put_le(out, pixels, 4);
  put_le(out, 2835, 4);
  put_le(out, 2835, 4);
  put_le(out, 0, 4);
  put_le(out, 0, 4);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int v = variant * 85;
      out.push_back(static_cast<std::uint8_t>((x * 255 / width + v) & 0xff));
      out.push_back(static_cast<std::uint8_t>((y * 255 / height + 2 * v) & 0xff));
      out.push_back(static_cast<std::uint8_t>(((x ^ y) * 4 + 3 * v) & 0xff));
    }
    for (std::uint32_t pad = static_cast<std::uint32_t>(width) * 3; pad < row; ++pad) out.push_back(0);
  }
  return out;
}

Bytes make_demo_video(std::size_t size, std::uint32_t seed) {
  std::mt19937 rng(seed);
  Bytes out(size);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

DemoSite build_demo_site(const fs::path& output) {
  DemoSite site;
  site.output = output;
  site.site_root = output / "site";
  site.trust_dir = output / "trust";
  site.keys_dir = output / "keys";
  std::error_code ec;
  for (const auto& dir : {site.site_root, site.trust_dir, site.keys_dir}) {
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  }

  const DemoChain chain = issue_demo_chain(DemoSite::kEndorser);
  write_file_atomic(site.trust_dir / "root.pem", chain.root.pem());
  const fs::path key_path = site.keys_dir / "endorser.key.pem";
  const fs::path cert_path = site.keys_dir / "endorser.chain.pem";
  write_file_atomic(key_path, chain.endorser_key.to_pem());
  write_file_atomic(cert_path, chain.endorser.pem() + chain.root.pem());

  auto write_bytes = [](const fs::path& p, const Bytes& b) { write_file_atomic(p, as_chars(b)); };
  write_bytes(site.site_root / DemoSite::kValidImage, make_demo_image(0));
  write_bytes(site.site_root / DemoSite::kSecondImage, make_demo_image(1));
  write_bytes(site.site_root / DemoSite::kPlainImage, make_demo_image(2));
  write_bytes(site.site_root / DemoSite::kVideo, make_demo_video(kDefaultChunkSize * 5 / 2));

  SignRequest req;
  req.key_path = key_path;
  req.cert_chain_path = cert_path;

  req.asset_path = site.site_root / DemoSite::kValidImage;
  req.metadata = demo_metadata("City council approves new park", "Aerial view of the proposed park site.");
  sign_asset(req);

  req.asset_path = site.site_root / DemoSite::kSecondImage;
  req.metadata = demo_metadata("Storm clears over downtown", "Skyline shortly after the storm passed.");
  sign_asset(req);

  req.asset_path = site.site_root / DemoSite::kVideo;
  req.metadata = demo_metadata("Harbor time-lapse", "Synthetic stand-in for a news video.");
  req.chunk_size = kDefaultChunkSize;
  sign_chunked(req);

  const std::string index =
      "<!DOCTYPE html>\n"
      "<html>\n<head><meta charset=\"utf-8\"><title>Example News demo</title></head>\n<body>\n"
      "<h1>Example News</h1>\n"
      "<figure><img src=\"img-valid.bmp\" alt=\"park\"><figcaption>City council approves new park</figcaption></figure>\n"
      "<figure><img src=\"img-second.bmp\" alt=\"storm\"><figcaption>Storm clears over downtown</figcaption></figure>\n"
      "<figure><img src=\"img-plain.bmp\" alt=\"unendorsed\"><figcaption>Reader photo (not endorsed)</figcaption></figure>\n"
      "<p><a href=\"video.html\">Video</a></p>\n"
      "</body>\n</html>\n";
  const std::map<std::string, std::string> index_map{
      {DemoSite::kValidImage, std::string(DemoSite::kValidImage) + ".xmp"},
      {DemoSite::kSecondImage, std::string(DemoSite::kSecondImage) + ".xmp"}};
  write_file_atomic(site.site_root / "index.html", annotate_html(index, index_map));

  const std::string video =
      "<!DOCTYPE html>\n"
      "<html>\n<head><meta charset=\"utf-8\"><title>Example News video</title></head>\n<body>\n"
      "<video src=\"video.bin\" controls></video>\n"
      "</body>\n</html>\n";
  write_file_atomic(site.site_root / "video.html",
                    annotate_html(video, {{DemoSite::kVideo, std::string(DemoSite::kVideo) + ".xmp"}}));
  return site;
}

}  // namespace mediacert
