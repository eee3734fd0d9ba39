#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "mediacert/bytes.hpp"

namespace mediacert {

struct FetchOptions {
  int max_redirects = 5;
  std::chrono::seconds timeout{10};
  /// Extra CA bundle for HTTPS (e.g. the demo server's self-signed root).
  std::optional<std::filesystem::path> ca_file;
  bool verify_tls = true;
};

struct FetchResult {
  bool ok = false;
  bool not_found = false;  // HTTP 404/410 or a missing local file
  int status = 0;          // HTTP status, 0 for local files / transport errors
  Bytes body;
  std::string error;
  std::string final_locator;
};

/// GETs an http(s) URL (following up to max_redirects redirects) or reads a
/// local path / file:// URL. Never throws; failures are described in the result.
FetchResult fetch(const std::string& locator, const FetchOptions& options = {});

}  // namespace mediacert
