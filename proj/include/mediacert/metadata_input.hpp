#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "mediacert/metadata.hpp"

namespace mediacert {

/// Metadata fields as supplied so far; nullopt = not supplied.
using PartialMetadata = std::array<std::optional<std::string>, EndorsementMetadata::kFieldCount>;

struct MetadataFieldInfo {
  std::string_view flag;          // CLI option name without dashes
  std::string_view env;           // environment variable
  std::string_view prompt_label;  // label shown when prompting
};

inline constexpr std::array<MetadataFieldInfo, EndorsementMetadata::kFieldCount> kMetadataFields{{
    {"date-time", "MEDIACERT_DATE_TIME", "dateTimeValue"},
    {"city", "MEDIACERT_CITY", "cityValue"},
    {"region", "MEDIACERT_REGION", "regionValue"},
    {"country", "MEDIACERT_COUNTRY", "countryValue"},
    {"creator", "MEDIACERT_CREATOR", "creatorValue"},
    {"headline", "MEDIACERT_HEADLINE", "headlineValue"},
    {"description", "MEDIACERT_DESCRIPTION", "descriptionValue"},
}};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the real process environment.
std::optional<std::string> process_env(std::string_view name);

struct PromptIo {
  std::istream& in;
  std::ostream& out;
};

/// Fills each field from flags, else the environment, else (when `prompt` is
/// given) an interactive prompt, asking in canonical field order. Throws
/// Error(InvalidArgument) naming the fields still missing.
EndorsementMetadata resolve_metadata(const PartialMetadata& flags, const EnvLookup& env,
                                     PromptIo* prompt);

/// Per field: `primary` if set, else `fallback`.
PartialMetadata merge_partial(const PartialMetadata& primary, const PartialMetadata& fallback);

/// Trims surrounding whitespace from every field, then rejects values XML
/// cannot carry unchanged. Throws Error(InvalidArgument).
EndorsementMetadata normalize_metadata(EndorsementMetadata meta);

/// Parses {"dateTime": ..., "city": ..., ...}; unknown keys are ignored.
/// Throws Error(InvalidArgument) for bad JSON or non-string values.
PartialMetadata metadata_from_json(std::string_view json);

}  // namespace mediacert
