#include <openssl/evp.h>

#include "mediacert/bytes.hpp"
#include "mediacert/error.hpp"

namespace mediacert {

namespace {

bool is_b64_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' ||
         c == '/';
}

void encode_block(const std::uint8_t* data, std::size_t len, std::string& out) {
  if (len == 0) return;
  const std::size_t start = out.size();
  out.resize(start + 4 * ((len + 2) / 3) + 1);
  const int written =
      EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data() + start), data, static_cast<int>(len));
  out.resize(start + static_cast<std::size_t>(written));
}

}  // namespace

std::string base64_encode(ByteView data) {
  std::string out;
  out.reserve(4 * ((data.size() + 2) / 3));
  // EVP_EncodeBlock takes an int length; go in bounded slices of 3n bytes.
  constexpr std::size_t kSlice = 3 * (1u << 20);
  for (std::size_t pos = 0; pos < data.size(); pos += kSlice) {
    encode_block(data.data() + pos, std::min(kSlice, data.size() - pos), out);
  }
  return out;
}

bool is_base64(std::string_view text) {
  if (text.size() % 4 != 0) return false;
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++pad;
  for (std::size_t i = 0; i < text.size() - pad; ++i) {
    if (!is_b64_char(text[i])) return false;
  }
  return true;
}

Bytes base64_decode(std::string_view text) {
  if (!is_base64(text)) throw Error(Errc::InvalidArgument, "not canonical Base64");
  if (text.empty()) return {};
  std::size_t pad = 0;
  if (text.back() == '=') ++pad;
  if (text[text.size() - 2] == '=') ++pad;
  Bytes out(text.size() / 4 * 3);
  constexpr std::size_t kSlice = 4 * (1u << 20);
  std::size_t written = 0;
  for (std::size_t pos = 0; pos < text.size(); pos += kSlice) {
    const std::size_t len = std::min(kSlice, text.size() - pos);
    const int n = EVP_DecodeBlock(out.data() + written,
                                  reinterpret_cast<const unsigned char*>(text.data() + pos),
                                  static_cast<int>(len));
    if (n < 0) throw Error(Errc::InvalidArgument, "Base64 decode failed");
    written += static_cast<std::size_t>(n);
  }
  out.resize(written - pad);
  return out;
}

std::string hex_encode(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

void Base64Stream::update(ByteView data, std::string& out) {
  std::size_t pos = 0;
  if (carry_len_ > 0) {
    while (carry_len_ < 2 && pos < data.size()) carry_[carry_len_++] = data[pos++];
    if (pos == data.size()) return;
    const std::uint8_t group[3] = {carry_[0], carry_[1], data[pos++]};
    encode_block(group, 3, out);
    carry_len_ = 0;
  }
  const std::size_t whole = (data.size() - pos) / 3 * 3;
  constexpr std::size_t kSlice = 3 * (1u << 20);
  for (std::size_t done = 0; done < whole; done += kSlice) {
    encode_block(data.data() + pos + done, std::min(kSlice, whole - done), out);
  }
  pos += whole;
  while (pos < data.size()) carry_[carry_len_++] = data[pos++];
}

void Base64Stream::finish(std::string& out) {
  encode_block(carry_, carry_len_, out);
  carry_len_ = 0;
}

}  // namespace mediacert
