#pragma once

#include <string>
#include <string_view>

namespace mediacert {

bool is_http_url(std::string_view locator);

/// Resolves `ref` against `base`. HTTP(S) bases follow RFC 3986 reference
/// resolution; other bases are treated as filesystem paths of the referring
/// document. The fragment of `ref` is dropped.
std::string resolve_reference(std::string_view base, std::string_view ref);

struct UrlParts {
  std::string scheme;     // lowercase
  std::string host;
  int port = 0;           // defaulted from the scheme when absent
  std::string path_query; // "/" at least
};

/// Splits an http(s) URL. Returns false for anything else.
bool split_url(std::string_view url, UrlParts& out);

}  // namespace mediacert
