#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <vector>

#include "mediacert/url.hpp"

namespace mediacert {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Scheme per RFC 3986: ALPHA *( ALPHA / DIGIT / "+" / "-" / "." ) ":"
bool has_scheme(std::string_view ref) {
  const auto colon = ref.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(ref[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = ref[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  const bool absolute = !path.empty() && path.front() == '/';
  if (absolute) pos = 1;
  bool trailing_slash = false;
  while (pos <= path.size()) {
    const auto slash = path.find('/', pos);
    const std::string_view seg =
        path.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    trailing_slash = false;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else if (seg == ".") {
      trailing_slash = true;
    } else {
      out.emplace_back(seg);
    }
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing_slash && (result.empty() || result.back() != '/')) result += '/';
  return result;
}

struct Reference {
  std::string scheme, authority, path, query;
  bool has_authority = false, has_query = false;
};

Reference split_reference(std::string_view s) {
  Reference r;
  if (has_scheme(s)) {
    const auto colon = s.find(':');
    r.scheme = lower(s.substr(0, colon));
    s.remove_prefix(colon + 1);
  }
  if (s.substr(0, 2) == "//") {
    s.remove_prefix(2);
    const auto end = s.find_first_of("/?");
    r.authority = std::string(s.substr(0, end));
    r.has_authority = true;
    s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
  }
  const auto q = s.find('?');
  r.path = std::string(s.substr(0, q));
  if (q != std::string_view::npos) {
    r.query = std::string(s.substr(q + 1));
    r.has_query = true;
  }
  return r;
}

std::string recompose(const Reference& r) {
  std::string out = r.scheme + ":";
  if (r.has_authority) out += "//" + r.authority;
  out += r.path;
  if (r.has_query) out += "?" + r.query;
  return out;
}

}  // namespace

bool is_http_url(std::string_view locator) {
  const std::string l = lower(locator.substr(0, 8));
  return l.rfind("http://", 0) == 0 || l.rfind("https://", 0) == 0;
}

std::string resolve_reference(std::string_view base, std::string_view ref) {
  ref = ref.substr(0, ref.find('#'));
  if (!is_http_url(base)) {
    if (has_scheme(ref) || (!ref.empty() && ref.front() == '/')) return std::string(ref);
    const std::filesystem::path dir = std::filesystem::path(std::string(base)).parent_path();
    return (dir / std::string(ref)).lexically_normal().string();
  }

  const Reference b = split_reference(base.substr(0, base.find('#')));
  const Reference r = split_reference(ref);
  Reference t;
  if (!r.scheme.empty()) {
    t = r;
    t.path = remove_dot_segments(r.path);
  } else {
    t.scheme = b.scheme;
    if (r.has_authority) {
      t.authority = r.authority;
      t.has_authority = true;
      t.path = remove_dot_segments(r.path);
      t.query = r.query;
      t.has_query = r.has_query;
    } else {
      t.authority = b.authority;
      t.has_authority = b.has_authority;
      if (r.path.empty()) {
        t.path = b.path;
        t.query = r.has_query ? r.query : b.query;
        t.has_query = r.has_query || b.has_query;
      } else {
        if (r.path.front() == '/') {
          t.path = remove_dot_segments(r.path);
        } else {
          std::string merged;
          if (b.has_authority && b.path.empty()) {
            merged = "/" + r.path;
          } else {
            const auto slash = b.path.rfind('/');
            merged = (slash == std::string::npos ? "" : b.path.substr(0, slash + 1)) + r.path;
          }
          t.path = remove_dot_segments(merged);
        }
        t.query = r.query;
        t.has_query = r.has_query;
      }
    }
  }
  return recompose(t);
}

namespace {

// Empty means the scheme default.
bool parse_port(std::string_view text, int& port) {
  if (text.empty()) return true;
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 1 || value > 65535) return false;
  port = value;
  return true;
}

}  // namespace

bool split_url(std::string_view url, UrlParts& out) {
  if (!is_http_url(url)) return false;
  const Reference r = split_reference(url.substr(0, url.find('#')));
  out.scheme = r.scheme;
  std::string authority = r.authority;
  if (const auto at = authority.rfind('@'); at != std::string::npos) authority.erase(0, at + 1);
  out.port = out.scheme == "https" ? 443 : 80;
  std::string host = authority;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    host = authority.substr(1, close == std::string::npos ? std::string::npos : close - 1);
    if (close != std::string::npos && close + 1 < authority.size() && authority[close + 1] == ':') {
      if (!parse_port(std::string_view(authority).substr(close + 2), out.port)) return false;
    }
  } else if (const auto colon = authority.rfind(':'); colon != std::string::npos) {
    host = authority.substr(0, colon);
    if (!parse_port(std::string_view(authority).substr(colon + 1), out.port)) return false;
  }
  out.host = host;
  out.path_query = r.path.empty() ? "/" : r.path;
  if (r.has_query) out.path_query += "?" + r.query;
  return !out.host.empty();
}

}  // namespace mediacert
