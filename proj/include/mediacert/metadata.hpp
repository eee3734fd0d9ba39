#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "mediacert/bytes.hpp"

namespace mediacert {

/// The seven descriptive fields an endorser attests to. Serialization order
/// is the declaration order and must never change.
struct EndorsementMetadata {
  std::string date_time;
  std::string city;
  std::string region;
  std::string country;
  std::string creator;
  std::string headline;
  std::string description;

  static constexpr std::size_t kFieldCount = 7;

  /// Field values in canonical order.
  std::array<const std::string*, kFieldCount> fields() const {
    return {&date_time, &city, &region, &country, &creator, &headline, &description};
  }
  std::array<std::string*, kFieldCount> fields() {
    return {&date_time, &city, &region, &country, &creator, &headline, &description};
  }

  auto operator<=>(const EndorsementMetadata&) const = default;
};

/// camelCase names used by the JSON report and per-file metadata inputs.
inline constexpr std::array<std::string_view, EndorsementMetadata::kFieldCount> kMetadataJsonKeys{
    "dateTime", "city", "region", "country", "creator", "headline", "description"};

enum class MediaKind { Image, Video, Other };

std::string_view to_string(MediaKind kind);

/// Guesses the media kind from a path or URL extension.
MediaKind media_kind_from_locator(std::string_view locator);

struct MediaAsset {
  Bytes bytes;
  MediaKind kind = MediaKind::Other;
  std::string locator;
};

}  // namespace mediacert
