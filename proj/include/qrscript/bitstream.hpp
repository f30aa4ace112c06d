#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrscript {

/// Bit-granular buffer. Writes append at the end; reads consume from a cursor
/// that starts at bit 0. Multi-bit values are written most significant bit
/// first, and bytes are packed MSB-first.
class BitStream {
 public:
  BitStream() = default;

  /// Unpacks bytes MSB-first.
  static BitStream from_bytes(std::span<const std::uint8_t> bytes);
  /// Parses a string of '0'/'1' characters; spaces are ignored.
  static BitStream from_string(std::string_view bits);

  void write_bit(bool bit) { bits_.push_back(bit ? 1 : 0); }
  /// Appends the low `count` bits of `value`, MSB first. Requires value < 2^count.
  void write_bits(std::uint64_t value, unsigned count);
  void append(const BitStream& other);

  bool read_bit();
  std::uint64_t read_bits(unsigned count);

  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t position() const noexcept { return cursor_; }
  std::size_t remaining() const noexcept { return bits_.size() - cursor_; }
  bool exhausted() const noexcept { return cursor_ == bits_.size(); }
  void seek(std::size_t position);

  bool operator[](std::size_t index) const { return bits_[index] != 0; }

  /// Packs MSB-first. The size must already be a whole number of bytes.
  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

  /// Bitwise equality; the read cursor is not compared.
  friend bool operator==(const BitStream& a, const BitStream& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

// Chained-saturation unsigned integers: chunks of `width` bits are summed, and
// an all-ones chunk means another chunk follows.

/// Number of bits encode_ext_uint emits for `value`.
std::size_t ext_uint_length(std::uint64_t value, unsigned width);
void encode_ext_uint(BitStream& out, std::uint64_t value, unsigned width);
std::uint64_t decode_ext_uint(BitStream& in, unsigned width);

// Integer operands: one selector bit (0 = 16-bit, 1 = 32-bit) followed by
// the value in two's complement at the smallest width that holds it.

std::size_t int_operand_length(std::int64_t value);
void encode_int_operand(BitStream& out, std::int64_t value);
std::int32_t decode_int_operand(BitStream& in);

/// IEEE 754 binary16 value held by its bit pattern.
struct Half {
  std::uint16_t bits = 0;

  static constexpr std::uint16_t kCanonicalNaN = 0x7E00;

  /// Round-to-nearest-even; out-of-range magnitudes become infinities and
  /// every NaN becomes kCanonicalNaN.
  static Half from_double(double value);
  double to_double() const;
  bool is_nan() const noexcept { return (bits & 0x7C00) == 0x7C00 && (bits & 0x03FF) != 0; }

  friend bool operator==(Half, Half) = default;
};

inline std::uint16_t encode_half_float(double value) { return Half::from_double(value).bits; }
inline double decode_half_float(std::uint16_t pattern) { return Half{pattern}.to_double(); }

}  // namespace qrscript
