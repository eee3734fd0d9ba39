#include <algorithm>
#include <array>
#include <cctype>

#include "mediacert/metadata.hpp"

namespace mediacert {

std::string_view to_string(MediaKind kind) {
  switch (kind) {
    case MediaKind::Image: return "image";
    case MediaKind::Video: return "video";
    case MediaKind::Other: return "other";
  }
  return "other";
}

MediaKind media_kind_from_locator(std::string_view locator) {
  // Ignore URL query/fragment.
  locator = locator.substr(0, locator.find_first_of("?#"));
  const auto dot = locator.rfind('.');
  if (dot == std::string_view::npos) return MediaKind::Other;
  std::string ext(locator.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static constexpr std::array<std::string_view, 10> kImage{"jpg", "jpeg", "png", "gif", "bmp",
                                                           "webp", "tif", "tiff", "svg", "avif"};
  static constexpr std::array<std::string_view, 7> kVideo{"mp4", "webm", "mov", "mkv",
                                                          "avi", "m4v", "ogv"};
  if (std::find(kImage.begin(), kImage.end(), ext) != kImage.end()) return MediaKind::Image;
  if (std::find(kVideo.begin(), kVideo.end(), ext) != kVideo.end()) return MediaKind::Video;
  return MediaKind::Other;
}

}  // namespace mediacert
