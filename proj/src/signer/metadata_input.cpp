#include <cstdlib>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "mediacert/error.hpp"
#include "mediacert/metadata_input.hpp"
#include "mediacert/sidecar.hpp"

namespace mediacert {

std::optional<std::string> process_env(std::string_view name) {
  const char* value = std::getenv(std::string(name).c_str());
  if (value == nullptr) return std::nullopt;
  return std::string(value);
}

PartialMetadata merge_partial(const PartialMetadata& primary, const PartialMetadata& fallback) {
  PartialMetadata out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = primary[i] ? primary[i] : fallback[i];
  return out;
}

EndorsementMetadata resolve_metadata(const PartialMetadata& flags, const EnvLookup& env,
                                     PromptIo* prompt) {
  EndorsementMetadata meta;
  auto fields = meta.fields();
  std::string missing;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::optional<std::string> value = flags[i];
    if (!value && env) value = env(kMetadataFields[i].env);
    if (!value && prompt != nullptr) {
      prompt->out << kMetadataFields[i].prompt_label << ": " << std::flush;
      std::string line;
      if (std::getline(prompt->in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        value = std::move(line);
      }
    }
    if (!value) {
      missing += missing.empty() ? "" : ", ";
      missing += kMetadataFields[i].flag;
      continue;
    }
    *fields[i] = std::move(*value);
  }
  if (!missing.empty()) throw Error(Errc::InvalidArgument, "missing metadata: " + missing);
  return meta;
}

EndorsementMetadata normalize_metadata(EndorsementMetadata meta) {
  for (std::string* field : meta.fields()) {
    const auto first = field->find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
      field->clear();
      continue;
    }
    const auto last = field->find_last_not_of(" \t\r\n");
    *field = field->substr(first, last - first + 1);
  }
  if (auto problem = metadata_problem(meta)) throw Error(Errc::InvalidArgument, *problem);
  return meta;
}

PartialMetadata metadata_from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("metadata JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::InvalidArgument, "metadata JSON must be an object");
  PartialMetadata out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto it = doc.find(std::string(kMetadataJsonKeys[i]));
    if (it == doc.end()) continue;
    if (!it->is_string()) {
      throw Error(Errc::InvalidArgument, std::string(kMetadataJsonKeys[i]) + " must be a string");
    }
    out[i] = it->get<std::string>();
  }
  return out;
}

}  // namespace mediacert
