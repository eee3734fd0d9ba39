#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediacert {

/// Attribute linking a media element to its sidecar.
inline constexpr std::string_view kCertAttribute = "x-media-cert";

/// An <img> or <video> start tag found in a page.
struct MediaElement {
  std::string tag;                  // lowercase "img" or "video"
  std::string src;                  // entity-decoded src attribute ("" if absent)
  std::optional<std::string> cert;  // entity-decoded x-media-cert, if present
};

/// Lists every img/video start tag in document order. Comments, declarations
/// and raw-text elements (script, style, textarea, title) are skipped.
/// Throws Error(UnparsableHtml) on an unterminated tag or comment.
std::vector<MediaElement> find_media_elements(std::string_view html);

/// Adds x-media-cert="<sidecar>" to each img/video whose src is a key of
/// `mapping`. Everything else is copied byte-for-byte. An existing attribute
/// with the right value is left alone; one with a different value is
/// rewritten. Idempotent. Throws Error(UnparsableHtml).
std::string annotate_html(std::string_view html, const std::map<std::string, std::string>& mapping);

}  // namespace mediacert
