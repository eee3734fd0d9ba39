#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mediacert/document.hpp"

namespace mediacert {

/// Sidecar location for an asset: the full filename with ".xmp" appended.
std::filesystem::path sidecar_path_for(const std::filesystem::path& asset);

/// Writes the XMP sidecar text. Metadata values are entity-escaped and emitted
/// without surrounding whitespace. Chunked documents list one remoteContent
/// per chunk inside contentSet.
std::string serialize_sidecar(const SidecarDocument& doc);

/// Parses sidecar text. Element text is trimmed; Base64 values may contain
/// whitespace (it is removed). Unknown elements are ignored.
/// Throws Error(MalformedSidecar).
SidecarDocument parse_sidecar(std::string_view text);

/// Why a metadata value cannot be carried through XML unchanged, or nullopt.
/// Rejects invalid UTF-8, C0 controls other than TAB/LF/CR, and leading or
/// trailing XML whitespace (which the parser trims).
std::optional<std::string> metadata_problem(const EndorsementMetadata& meta);

}  // namespace mediacert
