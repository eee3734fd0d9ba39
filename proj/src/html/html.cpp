#include <algorithm>
#include <cctype>
#include <functional>

#include "mediacert/error.hpp"
#include "mediacert/html.hpp"

namespace mediacert {

namespace {

struct Attr {
  std::string name;   // lowercase
  std::string value;  // entity-decoded
  std::size_t value_begin = 0;  // raw value span including quotes
  std::size_t value_end = 0;
  std::size_t name_end = 0;
  bool has_value = false;
};

struct StartTag {
  std::string name;  // lowercase
  std::vector<Attr> attrs;
  std::size_t attrs_end = 0;  // insertion point for a new attribute
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += raw[i];
      continue;
    }
    const std::string_view ent = raw.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      const std::string digits(ent.substr(hex ? 2 : 1));
      char* end = nullptr;
      const unsigned long cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (digits.empty() || *end != '\0' || cp > 0x10FFFF) {
        out += raw[i];
        continue;
      }
      append_utf8(out, cp);
    } else {
      out += raw[i];
      continue;
    }
    i = semi;
  }
  return out;
}

std::string escape_attr(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

[[noreturn]] void unparsable(const std::string& why, std::size_t pos) {
  throw Error(Errc::UnparsableHtml, why + " at byte " + std::to_string(pos));
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  const std::string h = lower(hay.substr(from));
  const auto p = h.find(needle);
  return p == std::string::npos ? std::string_view::npos : from + p;
}

// Parses a start tag beginning at html[lt] == '<'. Returns one past '>'.
std::size_t parse_start_tag(std::string_view html, std::size_t lt, StartTag& tag) {
  std::size_t i = lt + 1;
  const std::size_t name_begin = i;
  while (i < html.size() && !is_space(html[i]) && html[i] != '>' && html[i] != '/') ++i;
  tag.name = lower(html.substr(name_begin, i - name_begin));
  tag.attrs_end = i;
  for (;;) {
    while (i < html.size() && (is_space(html[i]) || (html[i] == '/' && i + 1 < html.size() && html[i + 1] != '>'))) ++i;
    if (i >= html.size()) unparsable("unterminated <" + tag.name + "> tag", lt);
    if (html[i] == '>') return i + 1;
    if (html[i] == '/' && i + 1 < html.size() && html[i + 1] == '>') return i + 2;
    if (html[i] == '/') unparsable("unterminated <" + tag.name + "> tag", lt);

    Attr attr;
    const std::size_t attr_begin = i;
    while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>' &&
           !(html[i] == '/' && i + 1 < html.size() && html[i + 1] == '>')) {
      ++i;
    }
    attr.name = lower(html.substr(attr_begin, i - attr_begin));
    attr.name_end = i;
    std::size_t j = i;
    while (j < html.size() && is_space(html[j])) ++j;
    if (j < html.size() && html[j] == '=') {
      ++j;
      while (j < html.size() && is_space(html[j])) ++j;
      if (j >= html.size()) unparsable("unterminated <" + tag.name + "> tag", lt);
      attr.has_value = true;
      attr.value_begin = j;
      if (html[j] == '"' || html[j] == '\'') {
        const auto close = html.find(html[j], j + 1);
        if (close == std::string_view::npos) unparsable("unterminated attribute value", j);
        attr.value = decode_entities(html.substr(j + 1, close - j - 1));
        i = close + 1;
      } else {
        std::size_t k = j;
        while (k < html.size() && !is_space(html[k]) && html[k] != '>') ++k;
        attr.value = decode_entities(html.substr(j, k - j));
        i = k;
      }
      attr.value_end = i;
    }
    tag.attrs_end = i;
    tag.attrs.push_back(std::move(attr));
  }
}

// Calls `visit` for every start tag, skipping comments, declarations, end
// tags and raw-text element bodies.
void scan(std::string_view html, const std::function<void(const StartTag&)>& visit) {
  std::size_t i = 0;
  while ((i = html.find('<', i)) != std::string_view::npos) {
    if (html.substr(i, 4) == "<!--") {
      const auto end = html.find("-->", i + 4);
      if (end == std::string_view::npos) unparsable("unterminated comment", i);
      i = end + 3;
    } else if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?' || html[i + 1] == '/')) {
      const auto end = html.find('>', i);
      if (end == std::string_view::npos) unparsable("unterminated markup", i);
      i = end + 1;
    } else if (i + 1 < html.size() && std::isalpha(static_cast<unsigned char>(html[i + 1]))) {
      StartTag tag;
      i = parse_start_tag(html, i, tag);
      visit(tag);
      if (tag.name == "script" || tag.name == "style" || tag.name == "textarea" || tag.name == "title") {
        const auto close = find_ci(html, "</" + tag.name, i);
        i = close == std::string_view::npos ? html.size() : close;
      }
    } else {
      ++i;
    }
  }
}

const Attr* find_attr(const StartTag& tag, std::string_view name) {
  for (const auto& a : tag.attrs) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

bool is_media(const StartTag& tag) { return tag.name == "img" || tag.name == "video"; }

}  // namespace

std::vector<MediaElement> find_media_elements(std::string_view html) {
  std::vector<MediaElement> out;
  scan(html, [&](const StartTag& tag) {
    if (!is_media(tag)) return;
    MediaElement el;
    el.tag = tag.name;
    if (const Attr* src = find_attr(tag, "src")) el.src = src->value;
    if (const Attr* cert = find_attr(tag, kCertAttribute)) el.cert = cert->value;
    out.push_back(std::move(el));
  });
  return out;
}

std::string annotate_html(std::string_view html, const std::map<std::string, std::string>& mapping) {
  struct Edit {
    std::size_t pos;
    std::size_t erase;
    std::string insert;
  };
  std::vector<Edit> edits;
  scan(html, [&](const StartTag& tag) {
    if (!is_media(tag)) return;
    const Attr* src = find_attr(tag, "src");
    if (src == nullptr) return;
    const auto it = mapping.find(src->value);
    if (it == mapping.end()) return;
    const std::string quoted = "\"" + escape_attr(it->second) + "\"";
    if (const Attr* cert = find_attr(tag, kCertAttribute)) {
      if (cert->has_value && cert->value == it->second) return;
      if (cert->has_value) {
        edits.push_back({cert->value_begin, cert->value_end - cert->value_begin, quoted});
      } else {
        // bare attribute: give it a value
        edits.push_back({cert->name_end, 0, "=" + quoted});
      }
      return;
    }
    edits.push_back({tag.attrs_end, 0, " " + std::string(kCertAttribute) + "=" + quoted});
  });
  std::string out(html);
  for (auto e = edits.rbegin(); e != edits.rend(); ++e) out.replace(e->pos, e->erase, e->insert);
  return out;
}

}  // namespace mediacert
