#include <expat.h>

#include <charconv>
#include <map>
#include <memory>
#include <vector>

#include "mediacert/bytes.hpp"
#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "mediacert/sidecar.hpp"

namespace mediacert {

namespace {

struct Node {
  std::string name;  // local name, prefix stripped
  std::map<std::string, std::string> attrs;
  std::vector<std::unique_ptr<Node>> children;
  std::string text;

  const Node* child(std::string_view n) const {
    for (const auto& c : children) {
      if (c->name == n) return c.get();
    }
    return nullptr;
  }

  const Node* descendant(std::string_view n) const {
    for (const auto& c : children) {
      if (c->name == n) return c.get();
      if (const Node* d = c->descendant(n)) return d;
    }
    return nullptr;
  }

  const Node* path(std::initializer_list<std::string_view> names) const {
    const Node* cur = this;
    for (auto n : names) {
      cur = cur->child(n);
      if (cur == nullptr) return nullptr;
    }
    return cur;
  }
};

std::string local_name(const char* qname) {
  std::string_view n(qname);
  const auto colon = n.rfind(':');
  return std::string(colon == std::string_view::npos ? n : n.substr(colon + 1));
}

struct TreeBuilder {
  std::unique_ptr<Node> root;
  std::vector<Node*> stack;

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(data);
    auto node = std::make_unique<Node>();
    node->name = local_name(name);
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) node->attrs[local_name(attrs[i])] = attrs[i + 1];
    Node* raw = node.get();
    if (self->stack.empty()) {
      self->root = std::move(node);
    } else {
      self->stack.back()->children.push_back(std::move(node));
    }
    self->stack.push_back(raw);
  }

  static void on_end(void* data, const XML_Char*) { static_cast<TreeBuilder*>(data)->stack.pop_back(); }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

struct ParserFree {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

std::unique_ptr<Node> build_tree(std::string_view text) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserFree> parser(XML_ParserCreate("UTF-8"));
  TreeBuilder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw Error(Errc::MalformedSidecar,
                std::string("not well-formed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                    " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  if (!builder.root) throw Error(Errc::MalformedSidecar, "empty document");
  return std::move(builder.root);
}

bool is_xml_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string trim(std::string_view s) {
  while (!s.empty() && is_xml_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_xml_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string strip_space(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!is_xml_space(c)) out += c;
  }
  return out;
}

[[noreturn]] void malformed(const std::string& why) { throw Error(Errc::MalformedSidecar, why); }

const Node& require(const Node* node, std::string_view what) {
  if (node == nullptr) malformed("missing " + std::string(what));
  return *node;
}

std::string base64_field(const Node& node, std::string_view what) {
  std::string value = strip_space(node.text);
  if (value.empty() || !is_base64(value)) malformed(std::string(what) + " is not valid Base64");
  return value;
}

std::uint64_t number_attr(const Node& node, const std::string& key) {
  const auto it = node.attrs.find(key);
  if (it == node.attrs.end()) malformed("remoteContent lacks " + key);
  const std::string value = trim(it->second);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    malformed("remoteContent " + key + " is not a non-negative integer");
  }
  return out;
}

std::vector<ChunkEntry> parse_chunks(const Node& content_set) {
  std::vector<ChunkEntry> chunks;
  std::uint64_t expected_offset = 0;
  for (const auto& rc : content_set.children) {
    if (rc->name != "remoteContent" || rc->attrs.count("index") == 0) continue;
    ChunkEntry c;
    c.index = number_attr(*rc, "index");
    c.byte_offset = number_attr(*rc, "offset");
    c.byte_length = number_attr(*rc, "length");
    if (c.index != chunks.size()) malformed("chunk indices are not contiguous from 0");
    if (c.byte_offset != expected_offset) malformed("chunk byte ranges are not contiguous");
    if (c.byte_length == 0) malformed("chunk length must be positive");
    expected_offset += c.byte_length;
    c.digest_hex = trim(require(rc->child("hash"), "chunk hash").text);
    if (!Digest::is_valid_hex(c.digest_hex)) malformed("chunk hash is not 64 lowercase hex chars");
    const auto sig = rc->attrs.find("signature");
    if (sig == rc->attrs.end()) malformed("remoteContent lacks signature");
    c.signature_b64 = strip_space(sig->second);
    if (c.signature_b64.empty() || !is_base64(c.signature_b64)) malformed("chunk signature is not valid Base64");
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace

SidecarDocument parse_sidecar(std::string_view text) {
  const auto root = build_tree(text);
  SidecarDocument doc;

  const Node& meta = require(root->name == "contentMeta" ? root.get() : root->descendant("contentMeta"),
                             "contentMeta");
  EndorsementMetadata& m = doc.metadata;
  m.date_time = trim(require(meta.child("contentCreated"), "contentCreated").text);
  m.city = trim(require(meta.path({"location", "city"}), "location/city").text);
  m.region = trim(require(meta.path({"location", "region"}), "location/region").text);
  m.country = trim(require(meta.path({"location", "country"}), "location/country").text);
  m.creator = trim(require(meta.path({"creator", "name"}), "creator/name").text);
  m.headline = trim(require(meta.child("headline"), "headline").text);
  m.description = trim(require(meta.child("description"), "description").text);

  const Node& sig = require(root->descendant("Signature"), "Signature");
  doc.digest_hex = trim(require(sig.path({"SignedInfo", "DigestValue"}), "DigestValue").text);
  if (!Digest::is_valid_hex(doc.digest_hex)) malformed("DigestValue is not 64 lowercase hex chars");
  doc.signature_b64 = base64_field(require(sig.child("SignatureValue"), "SignatureValue"), "SignatureValue");
  doc.certificate_b64 = base64_field(
      require(sig.path({"KeyInfo", "X509Data", "X509Certificate"}), "X509Certificate"),
      "X509Certificate");

  if (const Node* content_set = root->descendant("contentSet")) {
    auto chunks = parse_chunks(*content_set);
    if (!chunks.empty()) doc.chunks = std::move(chunks);
  }
  return doc;
}

std::optional<std::string> metadata_problem(const EndorsementMetadata& meta) {
  static constexpr std::array<std::string_view, 7> kNames{
      "date-time", "city", "region", "country", "creator", "headline", "description"};
  const auto fields = meta.fields();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const std::string& v = *fields[f];
    const std::string field(kNames[f]);
    if (!v.empty() && (is_xml_space(v.front()) || is_xml_space(v.back()))) {
      return field + " has leading or trailing whitespace";
    }
    for (std::size_t i = 0; i < v.size();) {
      const auto c = static_cast<unsigned char>(v[i]);
      std::size_t len = 0;
      std::uint32_t cp = 0;
      if (c < 0x80) {
        len = 1;
        cp = c;
      } else if ((c & 0xE0) == 0xC0) {
        len = 2;
        cp = c & 0x1F;
      } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        cp = c & 0x0F;
      } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        cp = c & 0x07;
      } else {
        return field + " is not valid UTF-8";
      }
      if (i + len > v.size()) return field + " is not valid UTF-8";
      for (std::size_t k = 1; k < len; ++k) {
        const auto cc = static_cast<unsigned char>(v[i + k]);
        if ((cc & 0xC0) != 0x80) return field + " is not valid UTF-8";
        cp = (cp << 6) | (cc & 0x3F);
      }
      static constexpr std::uint32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
      if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return field + " is not valid UTF-8";
      }
      if ((cp < 0x20 && cp != '\t' && cp != '\n' && cp != '\r') || cp == 0xFFFE || cp == 0xFFFF) {
        return field + " contains a character XML cannot carry";
      }
      i += len;
    }
  }
  return std::nullopt;
}

}  // namespace mediacert
