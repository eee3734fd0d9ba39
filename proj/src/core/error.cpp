#include "mediacert/error.hpp"

namespace mediacert {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::InvalidKey: return "InvalidKey";
    case Errc::MalformedCertificate: return "MalformedCertificate";
    case Errc::MalformedSidecar: return "MalformedSidecar";
    case Errc::IoError: return "IoError";
    case Errc::EmptyMedia: return "EmptyMedia";
    case Errc::UnparsableHtml: return "UnparsableHtml";
    case Errc::StreamTruncated: return "StreamTruncated";
    case Errc::PageUnreachable: return "PageUnreachable";
    case Errc::BindFailure: return "BindFailure";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mediacert
