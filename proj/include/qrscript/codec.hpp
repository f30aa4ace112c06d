#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrscript/bitstream.hpp"
#include "qrscript/ir.hpp"
#include "qrscript/qrio.hpp"

namespace qrscript {

/// Leading field of every payload. 0 selects the decision-tree dialect.
struct DialectId {
  std::uint64_t value = 0;
  friend bool operator==(const DialectId&, const DialectId&) = default;
};

inline constexpr DialectId kDecisionTreeDialect{0};
inline constexpr unsigned kDialectFieldWidth = 3;
inline constexpr unsigned kLengthFieldWidth = 4;  // string dimensions, references, jumps

/// Padding bits are a prefix of this pattern; all seven decode as a goto to
/// the instruction after the last one.
inline constexpr std::string_view kPaddingPattern = "1000000";

struct Payload {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const Payload&, const Payload&) = default;
};

struct DecodedProgram {
  DialectId dialect;
  Program program;
};

/// Appends the bytecode of one instruction located at 1-based `index`.
void encode_instruction(BitStream& out, const Quadruple& q, std::size_t index);
std::size_t instruction_bits(const Quadruple& q, std::size_t index);

/// Header, instructions, then padding to a byte boundary.
/// Throws InvalidProgramError, UnsupportedDialectError or EncodingError.
Payload encode_program(const Program& program, DialectId dialect = kDecisionTreeDialect);
/// Bits before padding, header included.
BitStream encode_bits(const Program& program, DialectId dialect = kDecisionTreeDialect);

/// Throws a CodecError subclass on anything that is not valid bytecode.
DecodedProgram decode_payload(std::span<const std::uint8_t> payload);

struct CapacityEntry {
  int version = 0;
  qrio::EcLevel ec_level = qrio::EcLevel::L;
  std::size_t capacity_bytes = 0;
  long long remaining_bytes = 0;  // negative when the payload does not fit
};

struct SizeReport {
  std::size_t header_bits = 0;
  std::vector<std::size_t> instruction_bits;  // one entry per instruction
  std::size_t total_bits = 0;                 // header + instructions
  std::size_t padding_bits = 0;
  std::size_t padded_bytes = 0;
  std::vector<CapacityEntry> capacity;  // every version at every level

  /// Smallest version that fits at `level`, or 0 if none does.
  int smallest_version(qrio::EcLevel level) const;
};

SizeReport measure(const Program& program, DialectId dialect = kDecisionTreeDialect);
std::string format_size_report(const SizeReport& report);

}  // namespace qrscript
