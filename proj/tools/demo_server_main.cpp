// demo-server: serve a directory of pages, media and sidecars for testing.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"

namespace fs = std::filesystem;
using namespace mediacert;

int main(int argc, char** argv) {
  CLI::App app{"Static fixture server for endorsed media"};
  std::string root, bind = "127.0.0.1:8080";
  std::vector<std::string> tamper;
  bool tls = false, build = false;
  app.add_option("root", root, "Directory to serve")->required();
  app.add_option("--bind", bind, "addr:port to listen on (port 0 picks a free one)");
  app.add_option("--tamper", tamper, "Root-relative asset to serve with its last byte flipped (repeatable)");
  app.add_flag("--tls", tls, "Serve HTTPS with a throwaway self-signed certificate");
  app.add_flag("--build", build, "Generate the demo site into <root> first and serve <root>/site");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--bind expects addr:port\n";
    return 2;
  }

  // Block termination signals before any thread starts; wait for them below.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    fs::path serve_root = root;
    if (build) serve_root = build_demo_site(root).site_root;
    ServeOptions options;
    options.root = serve_root;
    options.host = bind.substr(0, colon);
    options.port = std::stoi(bind.substr(colon + 1));
    options.tamper.insert(tamper.begin(), tamper.end());
    options.tls = tls;
    DemoServer server(options);
    std::cout << "serving " << serve_root.string() << " at " << server.base_url() << "/" << std::endl;
    if (tls) std::cout << "TLS root: " << server.tls_ca_file().string() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
