#include "mediacert/report_json.hpp"

#include <sstream>

namespace mediacert {

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["asset"] = r.asset_locator;
  j["status"] = std::string(to_string(r.status));
  const bool verified = r.status == VerificationStatus::Verified;
  j["endorser"] = verified && r.endorser ? nlohmann::json(r.endorser->display_name) : nlohmann::json();
  if (verified && r.metadata) {
    nlohmann::json meta = nlohmann::json::object();
    const auto fields = r.metadata->fields();
    for (std::size_t i = 0; i < fields.size(); ++i) meta[std::string(kMetadataJsonKeys[i])] = *fields[i];
    j["metadata"] = std::move(meta);
  } else {
    j["metadata"] = nullptr;
  }
  j["detail"] = r.detail;
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::json to_json(const PageReport& report) {
  nlohmann::json j;
  j["page"] = report.page_locator;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) j["entries"].push_back(to_json(e));
  j["summary"] = {{"verified", report.summary.verified},
                  {"failed", report.summary.failed},
                  {"noSidecar", report.summary.no_sidecar},
                  {"malformed", report.summary.malformed},
                  {"untrusted", report.summary.untrusted}};
  return j;
}

nlohmann::json to_json(const ChunkVerdict& v) {
  return {{"index", v.index},
          {"offset", v.byte_offset},
          {"length", v.byte_length},
          {"status", std::string(to_string(v.status))},
          {"detail", v.detail}};
}

std::string render_text(const VerificationReport& r) {
  std::ostringstream out;
  out << to_string(r.status) << "  " << r.asset_locator << "\n";
  if (r.status == VerificationStatus::Verified && r.endorser && r.metadata) {
    const EndorsementMetadata& m = *r.metadata;
    out << "  Endorsed by:  " << r.endorser->display_name << "\n"
        << "  Date & Time:  " << m.date_time << "\n"
        << "  Geolocation:  " << m.city << ", " << m.region << ", " << m.country << "\n"
        << "  Photographer: " << m.creator << "\n"
        << "  Headline:     " << m.headline << "\n"
        << "  Description:  " << m.description << "\n";
  } else if (!r.detail.empty()) {
    out << "  " << r.detail << "\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
  return out.str();
}

std::string render_text(const PageReport& report) {
  std::ostringstream out;
  out << "Page: " << report.page_locator << "\n";
  for (const auto& e : report.entries) out << render_text(e);
  const StatusCounts& s = report.summary;
  out << "Summary: verified=" << s.verified << " failed=" << s.failed << " noSidecar=" << s.no_sidecar
      << " malformed=" << s.malformed << " untrusted=" << s.untrusted << "\n";
  return out.str();
}

}  // namespace mediacert
