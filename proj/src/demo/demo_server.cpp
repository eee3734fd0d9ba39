#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <thread>

#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/pki.hpp"

namespace mediacert {

namespace fs = std::filesystem;

std::string content_type_for(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".xmp") return "application/xml";
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".css") return "text/css";
  if (ext == ".js") return "text/javascript";
  if (ext == ".json") return "application/json";
  if (ext == ".pem") return "application/x-pem-file";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".png") return "image/png";
  if (ext == ".gif") return "image/gif";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".webp") return "image/webp";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".mp4" || ext == ".m4v") return "video/mp4";
  if (ext == ".webm") return "video/webm";
  return "application/octet-stream";
}

void tamper_last_byte(Bytes& bytes) {
  if (!bytes.empty()) bytes.back() ^= 0xFF;
}

namespace {

// Root-relative, lexically normal, no leading slash; empty if it escapes root.
std::string normalize_relative(std::string_view path) {
  while (!path.empty() && path.front() == '/') path.remove_prefix(1);
  const fs::path norm = fs::path(std::string(path)).lexically_normal();
  const std::string s = norm.generic_string();
  if (s.empty() || s == "." ) return "";
  if (s == ".." || s.rfind("../", 0) == 0) return "";
  return s;
}

}  // namespace

struct DemoServer::Impl {
  ServeOptions options;
  std::set<std::string> tamper;
  std::unique_ptr<httplib::Server> server;
  std::thread thread;
  int port = 0;
  fs::path tls_dir;

  void handle(const httplib::Request& req, httplib::Response& res) const {
    std::string rel = req.path;
    if (rel.empty() || rel.back() == '/') rel += "index.html";
    rel = normalize_relative(rel);
    const fs::path file = options.root / rel;
    std::error_code ec;
    if (rel.empty() || !fs::is_regular_file(file, ec)) {
      res.status = 404;
      res.set_content("not found\n", "text/plain");
      return;
    }
    std::ifstream in(file, std::ios::binary);
    Bytes body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (file.extension() != ".xmp" && tamper.count(rel) > 0) tamper_last_byte(body);
    res.status = 200;
    res.set_content(std::string(as_chars(body)), content_type_for(file));
  }
};

DemoServer::DemoServer(ServeOptions options) : impl_(std::make_unique<Impl>()) {
  std::error_code ec;
  if (!fs::is_directory(options.root, ec)) throw Error(Errc::FileNotFound, "root " + options.root.string());
  for (const auto& t : options.tamper) impl_->tamper.insert(normalize_relative(t));
  impl_->options = std::move(options);

  if (impl_->options.tls) {
    std::mt19937_64 rng{std::random_device{}()};
    impl_->tls_dir = fs::temp_directory_path() / ("mediacert-tls-" + std::to_string(rng()));
    fs::create_directories(impl_->tls_dir);
    DemoChainOptions chain_options;
    chain_options.dns_names = {"localhost", "127.0.0.1"};
    const DemoChain chain = issue_demo_chain("localhost", chain_options);
    write_file_atomic(impl_->tls_dir / "ca.pem", chain.root.pem());
    write_file_atomic(impl_->tls_dir / "server.pem", chain.endorser.pem() + chain.root.pem());
    write_file_atomic(impl_->tls_dir / "server.key", chain.endorser_key.to_pem());
    impl_->server = std::make_unique<httplib::SSLServer>((impl_->tls_dir / "server.pem").c_str(),
                                                         (impl_->tls_dir / "server.key").c_str());
  } else {
    impl_->server = std::make_unique<httplib::Server>();
  }
  if (!impl_->server->is_valid()) throw Error(Errc::BindFailure, "server initialisation failed");

  // httplib's default also sets SO_REUSEPORT, which would let a second server
  // share an occupied port instead of failing.
  impl_->server->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  Impl* impl = impl_.get();
  impl_->server->Get(R"(/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle(req, res);
  });

  const std::string& host = impl_->options.host;
  if (impl_->options.port == 0) {
    impl_->port = impl_->server->bind_to_any_port(host);
  } else {
    impl_->port = impl_->server->bind_to_port(host, impl_->options.port) ? impl_->options.port : -1;
  }
  if (impl_->port <= 0) {
    throw Error(Errc::BindFailure, "cannot bind " + host + ":" + std::to_string(impl_->options.port));
  }
  impl_->thread = std::thread([impl] { impl->server->listen_after_bind(); });
  impl_->server->wait_until_ready();
}

DemoServer::~DemoServer() {
  stop();
  wait();
  if (!impl_->tls_dir.empty()) {
    std::error_code ignored;
    fs::remove_all(impl_->tls_dir, ignored);
  }
}

int DemoServer::port() const noexcept { return impl_->port; }

std::string DemoServer::base_url() const {
  const std::string& host = impl_->options.host;
  const std::string shown = host == "0.0.0.0" ? "127.0.0.1" : host;
  return std::string(impl_->options.tls ? "https" : "http") + "://" + shown + ":" + std::to_string(impl_->port);
}

fs::path DemoServer::tls_ca_file() const { return impl_->tls_dir.empty() ? fs::path{} : impl_->tls_dir / "ca.pem"; }

void DemoServer::stop() {
  if (impl_->server) impl_->server->stop();
}

void DemoServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace mediacert
