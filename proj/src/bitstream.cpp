#include "qrscript/bitstream.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrscript/error.hpp"

namespace qrscript {

namespace {

// Longest chained encoding we agree to produce. A full version-40 symbol
// holds fewer bits than this, so anything longer could never be carried.
constexpr std::size_t kMaxChainBits = 1u << 20;

void check_width(unsigned width) {
  if (width < 1 || width > 32) throw std::invalid_argument("chunk width must be in [1, 32]");
}

}  // namespace

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes) {
  BitStream out;
  out.bits_.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) out.write_bits(byte, 8);
  return out;
}

BitStream BitStream::from_string(std::string_view bits) {
  BitStream out;
  for (char c : bits) {
    if (c == '0' || c == '1') {
      out.write_bit(c == '1');
    } else if (c != ' ') {
      throw std::invalid_argument("bit string may only contain '0', '1' and spaces");
    }
  }
  return out;
}

void BitStream::write_bits(std::uint64_t value, unsigned count) {
  if (count == 0 || count > 64) throw EncodingError("bit count must be in [1, 64]");
  if (count < 64 && (value >> count) != 0) {
    throw EncodingError("value " + std::to_string(value) + " does not fit in " + std::to_string(count) +
                        " bits");
  }
  for (unsigned i = count; i-- > 0;) bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

void BitStream::append(const BitStream& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

bool BitStream::read_bit() {
  if (cursor_ >= bits_.size()) throw TruncationError("bit stream exhausted");
  return bits_[cursor_++] != 0;
}

std::uint64_t BitStream::read_bits(unsigned count) {
  if (count == 0 || count > 64) throw std::invalid_argument("bit count must be in [1, 64]");
  if (remaining() < count) {
    throw TruncationError("needed " + std::to_string(count) + " bits, " + std::to_string(remaining()) +
                          " left");
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < count; ++i) value = (value << 1) | bits_[cursor_++];
  return value;
}

void BitStream::seek(std::size_t position) {
  if (position > bits_.size()) throw std::out_of_range("seek past end of bit stream");
  cursor_ = position;
}

std::vector<std::uint8_t> BitStream::to_bytes() const {
  if (bits_.size() % 8 != 0) throw EncodingError("bit stream is not byte aligned");
  std::vector<std::uint8_t> bytes(bits_.size() / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    bytes[i / 8] = static_cast<std::uint8_t>(bytes[i / 8] | (bits_[i] << (7 - i % 8)));
  }
  return bytes;
}

std::string BitStream::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::size_t ext_uint_length(std::uint64_t value, unsigned width) {
  check_width(width);
  const std::uint64_t saturated = (std::uint64_t{1} << width) - 1;
  const std::uint64_t chunks = value / saturated + 1;
  if (chunks > kMaxChainBits / width) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(chunks) * width;
}

void encode_ext_uint(BitStream& out, std::uint64_t value, unsigned width) {
  if (ext_uint_length(value, width) > kMaxChainBits) {
    throw EncodingError("value " + std::to_string(value) + " is too large for a chained " +
                        std::to_string(width) + "-bit field");
  }
  const std::uint64_t saturated = (std::uint64_t{1} << width) - 1;
  while (value >= saturated) {
    out.write_bits(saturated, width);
    value -= saturated;
  }
  out.write_bits(value, width);
}

std::uint64_t decode_ext_uint(BitStream& in, unsigned width) {
  check_width(width);
  const std::uint64_t saturated = (std::uint64_t{1} << width) - 1;
  std::uint64_t value = 0;
  for (;;) {
    const std::uint64_t chunk = in.read_bits(width);
    value += chunk;
    if (chunk != saturated) return value;
  }
}

std::size_t int_operand_length(std::int64_t value) {
  if (value < std::numeric_limits<std::int32_t>::min() || value > std::numeric_limits<std::int32_t>::max()) {
    throw EncodingError("integer operand " + std::to_string(value) + " exceeds 32 bits");
  }
  return (value >= -32768 && value <= 32767) ? 17 : 33;
}

void encode_int_operand(BitStream& out, std::int64_t value) {
  if (int_operand_length(value) == 17) {
    out.write_bit(false);
    out.write_bits(static_cast<std::uint16_t>(value), 16);
  } else {
    out.write_bit(true);
    out.write_bits(static_cast<std::uint32_t>(value), 32);
  }
}

std::int32_t decode_int_operand(BitStream& in) {
  if (in.read_bit()) return static_cast<std::int32_t>(static_cast<std::uint32_t>(in.read_bits(32)));
  return static_cast<std::int16_t>(static_cast<std::uint16_t>(in.read_bits(16)));
}

Half Half::from_double(double value) {
  if (std::isnan(value)) return Half{kCanonicalNaN};
  const std::uint16_t sign = std::signbit(value) ? 0x8000 : 0;
  const double magnitude = std::fabs(value);
  if (magnitude == 0.0) return Half{sign};
  if (std::isinf(magnitude)) return Half{static_cast<std::uint16_t>(sign | 0x7C00)};

  int exp2 = 0;
  std::frexp(magnitude, &exp2);  // magnitude = m * 2^exp2, m in [0.5, 1)
  int exponent = exp2 - 1;

  // Scaling by a power of two is exact, so nearbyint performs the only rounding
  // (ties-to-even under the default rounding mode).
  if (exponent < -14) {
    const double quanta = std::nearbyint(std::ldexp(magnitude, 24));
    // 1024 quanta lands exactly on the smallest normal, whose pattern is 0x0400.
    return Half{static_cast<std::uint16_t>(sign | static_cast<std::uint16_t>(quanta))};
  }
  double mantissa = std::nearbyint(std::ldexp(magnitude, 10 - exponent));
  if (mantissa == 2048.0) {
    mantissa = 1024.0;
    ++exponent;
  }
  if (exponent > 15) return Half{static_cast<std::uint16_t>(sign | 0x7C00)};
  const auto biased = static_cast<std::uint16_t>(exponent + 15);
  return Half{static_cast<std::uint16_t>(sign | (biased << 10) | (static_cast<std::uint16_t>(mantissa) - 1024))};
}

double Half::to_double() const {
  const bool negative = (bits & 0x8000) != 0;
  const int biased = (bits >> 10) & 0x1F;
  const int fraction = bits & 0x3FF;
  double magnitude = 0.0;
  if (biased == 0x1F) {
    magnitude = fraction == 0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  } else if (biased == 0) {
    magnitude = std::ldexp(static_cast<double>(fraction), -24);
  } else {
    magnitude = std::ldexp(static_cast<double>(fraction + 1024), biased - 25);
  }
  return negative ? -magnitude : magnitude;
}

}  // namespace qrscript
