#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include "mediacert/bytes.hpp"

namespace mediacert {

/// Paths of a generated demo site.
struct DemoSite {
  std::filesystem::path output;     // directory passed to build_demo_site
  std::filesystem::path site_root;  // output/site, the directory to serve
  std::filesystem::path trust_dir;  // output/trust (root.pem)
  std::filesystem::path keys_dir;   // output/keys (endorser key + cert chain)

  static constexpr const char* kValidImage = "img-valid.bmp";
  static constexpr const char* kSecondImage = "img-second.bmp";
  static constexpr const char* kPlainImage = "img-plain.bmp";
  static constexpr const char* kVideo = "video.bin";
  static constexpr const char* kEndorser = "Example News";
};

/// A small deterministic 24-bit BMP; different variants differ in content.
Bytes make_demo_image(int variant, int width = 96, int height = 64);

/// Deterministic pseudo-random bytes standing in for a video file.
Bytes make_demo_video(std::size_t size, std::uint32_t seed = 7);

/// Generates a demo CA and "Example News" endorser, three images (two signed
/// and annotated in index.html, one plain), and a chunk-signed video on
/// video.html. Rerunning regenerates keys and overwrites everything.
/// Throws Error(IoError).
DemoSite build_demo_site(const std::filesystem::path& output);

struct ServeOptions {
  std::filesystem::path root;
  std::string host = "127.0.0.1";
  int port = 0;  // 0 = pick a free port
  /// Root-relative paths served with their last byte XOR 0xFF (.xmp excluded).
  std::set<std::string> tamper;
  bool tls = false;
};

/// Read-only static file server for fixtures. Starts listening on
/// construction and stops on destruction.
class DemoServer {
 public:
  /// Throws Error(FileNotFound) for a missing root, Error(BindFailure) if the
  /// address cannot be bound.
  explicit DemoServer(ServeOptions options);
  ~DemoServer();
  DemoServer(const DemoServer&) = delete;
  DemoServer& operator=(const DemoServer&) = delete;

  int port() const noexcept;
  std::string base_url() const;
  /// PEM file of the self-signed TLS root (TLS mode only).
  std::filesystem::path tls_ca_file() const;

  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Content-Type for a served path.
std::string content_type_for(const std::filesystem::path& path);

/// Applies the tamper transform (last byte XOR 0xFF) in place.
void tamper_last_byte(Bytes& bytes);

}  // namespace mediacert
