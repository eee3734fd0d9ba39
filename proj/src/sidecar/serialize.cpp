#include <sstream>

#include "mediacert/sidecar.hpp"

namespace mediacert {

namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;  // survives line-end normalization
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::filesystem::path sidecar_path_for(const std::filesystem::path& asset) {
  std::filesystem::path out = asset;
  out += ".xmp";
  return out;
}

std::string serialize_sidecar(const SidecarDocument& doc) {
  const EndorsementMetadata& m = doc.metadata;
  std::ostringstream x;
  x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<xmpmeta xmlns:x=\"adobe:xs:meta/\" x:xmptk=\"Adobe XMP Core 5.6-c148 79.163820, "
       "2019/02/20-18:54:02\">\n"
    << "<RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\">\n"
    << "<NewsItemDescription rdf:about=\"\">\n"
    << "<newsItem xml:lang=\"en-US\">\n"
    << "  <catalogRef href=\"\"/>\n"
    << "  <contentMeta>\n"
    << "    <contentCreated>" << escape(m.date_time) << "</contentCreated>\n"
    << "    <location>\n"
    << "      <city>" << escape(m.city) << "</city>\n"
    << "      <region>" << escape(m.region) << "</region>\n"
    << "      <country>" << escape(m.country) << "</country>\n"
    << "    </location>\n"
    << "    <creator role=\"crol:photographer\">\n"
    << "      <name>" << escape(m.creator) << "</name>\n"
    << "    </creator>\n"
    << "    <creditline></creditline>\n"
    << "    <subject type=\"cpnat:abstract\" qcode=\"medtop:20000717\">\n"
    << "      <name xml:lang=\"en-GB\"></name>\n"
    << "    </subject>\n"
    << "    <headline>" << escape(m.headline) << "</headline>\n"
    << "    <description>" << escape(m.description) << "</description>\n"
    << "  </contentMeta>\n"
    << "  <contentSet>\n";
  if (doc.is_chunked()) {
    for (const ChunkEntry& c : *doc.chunks) {
      x << "    <remoteContent index=\"" << c.index << "\" offset=\"" << c.byte_offset
        << "\" length=\"" << c.byte_length << "\" signature=\"" << escape(c.signature_b64)
        << "\">\n"
        << "      <hash type=\"SHA-2\">" << escape(c.digest_hex) << "</hash>\n"
        << "    </remoteContent>\n";
    }
  } else {
    x << "    <remoteContent>\n"
      << "      <hash type=\"SHA-2\"></hash>\n"
      << "    </remoteContent>\n";
  }
  x << "  </contentSet>\n"
    << "</newsItem>\n"
    << "<Signature>\n"
    << "  <SignedInfo>\n"
    << "    <DigestMethod Algorithm=\"http://www.w3.org/2001/04/xmldsig#sha256\"/>\n"
    << "    <DigestValue>" << escape(doc.digest_hex) << "</DigestValue>\n"
    << "  </SignedInfo>\n"
    << "  <SignatureValue>" << escape(doc.signature_b64) << "</SignatureValue>\n"
    << "  <KeyInfo>\n"
    << "    <X509Data>\n"
    << "      <X509Certificate>" << escape(doc.certificate_b64) << "</X509Certificate>\n"
    << "    </X509Data>\n"
    << "  </KeyInfo>\n"
    << "</Signature>\n"
    << "</NewsItemDescription>\n"
    << "</RDF>\n"
    << "</xmpmeta>\n";
  return x.str();
}

}  // namespace mediacert
