#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mediacert {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string_view as_chars(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto v = as_bytes(s);
  return {v.begin(), v.end()};
}

/// RFC 4648 standard alphabet, padded, never line-wrapped.
std::string base64_encode(ByteView data);

/// Strict decoder: length must be a multiple of four, padding only at the end,
/// no whitespace. Throws Error(InvalidArgument) otherwise.
Bytes base64_decode(std::string_view text);

bool is_base64(std::string_view text);

std::string hex_encode(ByteView data);

/// Incremental Base64 encoder. Holds at most two input bytes between calls so
/// arbitrarily large inputs can be encoded piecewise with identical output.
class Base64Stream {
 public:
  /// Appends the encoding of `data` (excluding any carried tail) to `out`.
  void update(ByteView data, std::string& out);
  /// Flushes the carried tail with padding.
  void finish(std::string& out);
  std::size_t carried() const noexcept { return carry_len_; }

 private:
  std::uint8_t carry_[2]{};
  std::size_t carry_len_ = 0;
};

}  // namespace mediacert
