#include <httplib.h>

#include <fstream>
#include <iterator>

#include "mediacert/fetch.hpp"
#include "mediacert/url.hpp"

namespace mediacert {

namespace {

FetchResult read_local(const std::string& locator) {
  std::string path = locator;
  if (path.rfind("file://", 0) == 0) path.erase(0, 7);
  FetchResult result;
  result.final_locator = locator;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || std::filesystem::is_directory(path, ec)) {
    result.not_found = true;
    result.error = "not found: " + path;
    return result;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    result.error = "cannot open " + path;
    return result;
  }
  result.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  result.ok = true;
  return result;
}

bool is_redirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

}  // namespace

FetchResult fetch(const std::string& locator, const FetchOptions& options) {
  if (!is_http_url(locator)) return read_local(locator);

  FetchResult result;
  std::string url = locator;
  for (int hop = 0;; ++hop) {
    UrlParts parts;
    if (!split_url(url, parts)) {
      result.error = "bad URL: " + url;
      return result;
    }
    httplib::Client client(parts.scheme + "://" + parts.host + ":" + std::to_string(parts.port));
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_follow_location(false);
    if (parts.scheme == "https") {
      client.enable_server_certificate_verification(options.verify_tls);
      if (options.ca_file) client.set_ca_cert_path(options.ca_file->string());
    }
    auto res = client.Get(parts.path_query);
    result.final_locator = url;
    if (!res) {
      result.error = "transport error: " + httplib::to_string(res.error());
      return result;
    }
    result.status = res->status;
    if (is_redirect(res->status) && res->has_header("Location")) {
      if (hop >= options.max_redirects) {
        result.error = "too many redirects (limit " + std::to_string(options.max_redirects) + ")";
        return result;
      }
      url = resolve_reference(url, res->get_header_value("Location"));
      continue;
    }
    if (res->status == 404 || res->status == 410) {
      result.not_found = true;
      result.error = "HTTP " + std::to_string(res->status);
      return result;
    }
    if (res->status < 200 || res->status >= 300) {
      result.error = "HTTP " + std::to_string(res->status);
      return result;
    }
    result.body = to_bytes(res->body);
    result.ok = true;
    return result;
  }
}

}  // namespace mediacert
