#pragma once

#include <string>

#include <json.hpp>

#include "mediacert/verifier.hpp"

namespace mediacert {

/// {asset, status, endorser, metadata:{dateTime,...}, detail, warnings}.
/// endorser and metadata are null unless the status is Verified.
nlohmann::json to_json(const VerificationReport& report);

/// {page, entries:[...], summary:{verified,failed,noSidecar,malformed,untrusted}}.
nlohmann::json to_json(const PageReport& report);

nlohmann::json to_json(const ChunkVerdict& verdict);

std::string render_text(const VerificationReport& report);
std::string render_text(const PageReport& report);

}  // namespace mediacert
