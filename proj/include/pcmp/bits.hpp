#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcmp/rng.hpp"

namespace pcmp {

// Bit string, one byte per bit (values 0/1). Desk-scale clarity over packing.
using Bits = std::vector<std::uint8_t>;

inline Bits random_bits(Rng& rng, std::size_t n) {
  Bits out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    out[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return out;
}

inline Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

// Hex rendering packs MSB-first and zero-pads the final byte; the bit count
// travels alongside in the transcript event.
inline std::string bits_to_hex(const Bits& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 7) / 8 * 2);
  for (std::size_t base = 0; base < bits.size(); base += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      byte <<= 1;
      if (base + j < bits.size() && bits[base + j]) byte |= 1u;
    }
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xf]);
  }
  return out;
}

inline Bits bits_from_hex(std::string_view hex, std::size_t n_bits) {
  if (hex.size() * 4 < n_bits)
    throw std::invalid_argument("bits_from_hex: hex string too short");
  Bits out(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const char ch = hex[i / 4];
    unsigned nibble;
    if (ch >= '0' && ch <= '9')
      nibble = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f')
      nibble = static_cast<unsigned>(ch - 'a') + 10;
    else if (ch >= 'A' && ch <= 'F')
      nibble = static_cast<unsigned>(ch - 'A') + 10;
    else
      throw std::invalid_argument("bits_from_hex: bad hex digit");
    out[i] = static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1u);
  }
  return out;
}

// Text payload framing: 32-bit big-endian byte length, then the raw bytes.
// Every protocol message is a framed text (scalars in canonical "num/den"
// form), so plaintext lengths are unambiguous after decryption.
inline Bits frame_text(std::string_view text) {
  const std::uint32_t len = static_cast<std::uint32_t>(text.size());
  Bits out;
  out.reserve((4 + text.size()) * 8);
  for (int i = 31; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((len >> i) & 1u));
  for (unsigned char byte : text)
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((byte >> i) & 1u));
  return out;
}

inline std::string unframe_text(const Bits& bits) {
  if (bits.size() < 32 || bits.size() % 8 != 0)
    throw std::invalid_argument("unframe_text: malformed frame");
  std::uint32_t len = 0;
  for (std::size_t i = 0; i < 32; ++i) len = (len << 1) | bits[i];
  if (bits.size() != (4 + static_cast<std::size_t>(len)) * 8)
    throw std::invalid_argument("unframe_text: length prefix mismatch");
  std::string out(len, '\0');
  for (std::size_t b = 0; b < len; ++b) {
    unsigned byte = 0;
    for (std::size_t i = 0; i < 8; ++i) byte = (byte << 1) | bits[32 + b * 8 + i];
    out[b] = static_cast<char>(byte);
  }
  return out;
}

}  // namespace pcmp
