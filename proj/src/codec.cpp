#include "qrscript/codec.hpp"

#include <sstream>

#include "qrscript/error.hpp"

namespace qrscript {

namespace {

constexpr unsigned kOpcodeBits = 3;
constexpr unsigned kRelOpBits = 3;
constexpr unsigned kCharBits = 7;

std::size_t relative_jump(std::size_t target, std::size_t index) {
  if (target <= index) throw EncodingError("backward jump cannot be encoded");
  return target - index - 1;
}

void encode_string(BitStream& out, const std::string& text) {
  out.write_bit(false);  // stype 0: compact 7-bit string
  encode_ext_uint(out, text.size(), kLengthFieldWidth);
  for (char c : text) {
    const auto code = static_cast<unsigned char>(c);
    if (code > 127) throw EncodingError("character " + std::to_string(code) + " is not 7-bit");
    out.write_bits(code, kCharBits);
  }
}

void encode_constant(BitStream& out, const Constant& constant) {
  if (const auto* text = std::get_if<std::string>(&constant)) {
    out.write_bit(false);
    encode_string(out, *text);
  } else {
    out.write_bit(true);
    encode_ext_uint(out, std::get<Reference>(constant).number, kLengthFieldWidth);
  }
}

std::size_t constant_bits(const Constant& constant) {
  if (const auto* text = std::get_if<std::string>(&constant)) {
    return 1 + 1 + ext_uint_length(text->size(), kLengthFieldWidth) + kCharBits * text->size();
  }
  return 1 + ext_uint_length(std::get<Reference>(constant).number, kLengthFieldWidth);
}

std::size_t operand_bits(const Operand& operand) {
  if (const auto* i = std::get_if<std::int32_t>(&operand)) return 1 + int_operand_length(*i);
  return 1 + 16;
}

std::string decode_string(BitStream& in) {
  if (in.read_bit()) throw ReservedStringTypeError("reserved string type (stype = 1)");
  const std::uint64_t length = decode_ext_uint(in, kLengthFieldWidth);
  if (length * kCharBits > in.remaining()) throw TruncationError("string body truncated");
  std::string text;
  text.reserve(static_cast<std::size_t>(length));
  for (std::uint64_t i = 0; i < length; ++i) text.push_back(static_cast<char>(in.read_bits(kCharBits)));
  return text;
}

Constant decode_constant(BitStream& in) {
  if (in.read_bit()) return Reference{decode_ext_uint(in, kLengthFieldWidth)};
  return decode_string(in);
}

// Decodes one instruction; `target` temporarily holds the relative jump.
Quadruple decode_instruction(BitStream& in) {
  const auto code = static_cast<std::uint8_t>(in.read_bits(kOpcodeBits));
  if (code == 0b111) throw ReservedOpcodeError("reserved opcode 111 at bit " + std::to_string(in.position() - 3));
  Quadruple q;
  q.opcode = static_cast<Opcode>(code);
  switch (q.opcode) {
    case Opcode::Input:
    case Opcode::Inputs:
    case Opcode::Print:
    case Opcode::Printex: q.constant = decode_constant(in); break;
    case Opcode::Goto: q.target = decode_ext_uint(in, kLengthFieldWidth); break;
    case Opcode::If:
      q.constant = decode_constant(in);
      q.target = decode_ext_uint(in, kLengthFieldWidth);
      break;
    case Opcode::Ifc: {
      const auto op = in.read_bits(kRelOpBits);
      if (op > static_cast<std::uint64_t>(RelOp::Gt)) {
        throw MalformedPayloadError("unknown relational operator code " + std::to_string(op));
      }
      q.rel_op = static_cast<RelOp>(op);
      if (in.read_bit()) {
        q.operand = Half{static_cast<std::uint16_t>(in.read_bits(16))};
      } else {
        q.operand = decode_int_operand(in);
      }
      q.target = decode_ext_uint(in, kLengthFieldWidth);
      break;
    }
  }
  return q;
}

void check_dialect(DialectId dialect) {
  if (dialect != kDecisionTreeDialect) throw UnsupportedDialectError(dialect.value);
}

}  // namespace

void encode_instruction(BitStream& out, const Quadruple& q, std::size_t index) {
  out.write_bits(static_cast<std::uint8_t>(q.opcode), kOpcodeBits);
  switch (q.opcode) {
    case Opcode::Input:
    case Opcode::Inputs:
    case Opcode::Print:
    case Opcode::Printex: encode_constant(out, q.constant.value()); break;
    case Opcode::Goto: encode_ext_uint(out, relative_jump(q.target.value(), index), kLengthFieldWidth); break;
    case Opcode::If:
      encode_constant(out, q.constant.value());
      encode_ext_uint(out, relative_jump(q.target.value(), index), kLengthFieldWidth);
      break;
    case Opcode::Ifc: {
      out.write_bits(static_cast<std::uint8_t>(q.rel_op.value()), kRelOpBits);
      const Operand& operand = q.operand.value();
      if (const auto* i = std::get_if<std::int32_t>(&operand)) {
        out.write_bit(false);
        encode_int_operand(out, *i);
      } else {
        out.write_bit(true);
        out.write_bits(std::get<Half>(operand).bits, 16);
      }
      encode_ext_uint(out, relative_jump(q.target.value(), index), kLengthFieldWidth);
      break;
    }
  }
}

std::size_t instruction_bits(const Quadruple& q, std::size_t index) {
  std::size_t bits = kOpcodeBits;
  if (q.constant) bits += constant_bits(*q.constant);
  if (q.rel_op) bits += kRelOpBits;
  if (q.operand) bits += operand_bits(*q.operand);
  if (q.target) bits += ext_uint_length(relative_jump(*q.target, index), kLengthFieldWidth);
  return bits;
}

BitStream encode_bits(const Program& program, DialectId dialect) {
  check_dialect(dialect);
  require_valid(program);
  BitStream bits;
  encode_ext_uint(bits, dialect.value, kDialectFieldWidth);
  for (std::size_t index = 1; index <= program.size(); ++index) {
    encode_instruction(bits, program.at(index), index);
  }
  return bits;
}

Payload encode_program(const Program& program, DialectId dialect) {
  BitStream bits = encode_bits(program, dialect);
  const std::size_t padding = (8 - bits.size() % 8) % 8;
  for (std::size_t i = 0; i < padding; ++i) bits.write_bit(kPaddingPattern[i] == '1');
  return Payload{bits.to_bytes()};
}

DecodedProgram decode_payload(std::span<const std::uint8_t> payload) {
  if (payload.empty()) throw MalformedPayloadError("empty payload");
  BitStream in = BitStream::from_bytes(payload);

  DecodedProgram out;
  try {
    out.dialect.value = decode_ext_uint(in, kDialectFieldWidth);
  } catch (const TruncationError&) {
    throw MalformedPayloadError("truncated dialect header");
  }
  check_dialect(out.dialect);

  std::vector<std::size_t> starts;
  Program& program = out.program;
  while (!in.exhausted()) {
    const std::size_t start = in.position();
    try {
      program.instructions.push_back(decode_instruction(in));
      starts.push_back(start);
    } catch (const TruncationError&) {
      // An incomplete instruction in the final partial byte is padding.
      if (in.size() - start <= 7) break;
      throw MalformedPayloadError("instruction at bit " + std::to_string(start) + " is truncated");
    }
  }

  for (std::size_t index = 1; index <= program.size(); ++index) {
    auto& q = program.instructions[index - 1];
    if (q.target) q.target = index + 1 + *q.target;
  }

  // A complete goto-to-next inside the last seven bits is the padding itself.
  if (!program.empty()) {
    const Quadruple& last = program.instructions.back();
    if (last.opcode == Opcode::Goto && last.target == program.size() + 1 && in.size() - starts.back() <= 7) {
      program.instructions.pop_back();
    }
  }

  const auto violations = validate(program);
  if (!violations.empty()) {
    throw MalformedPayloadError("decoded program is invalid at (" + std::to_string(violations.front().index) +
                                "): " + violations.front().message);
  }
  return out;
}

int SizeReport::smallest_version(qrio::EcLevel level) const {
  for (const auto& entry : capacity) {
    if (entry.ec_level == level && entry.remaining_bytes >= 0) return entry.version;
  }
  return 0;
}

SizeReport measure(const Program& program, DialectId dialect) {
  check_dialect(dialect);
  require_valid(program);
  SizeReport report;
  report.header_bits = ext_uint_length(dialect.value, kDialectFieldWidth);
  report.total_bits = report.header_bits;
  for (std::size_t index = 1; index <= program.size(); ++index) {
    report.instruction_bits.push_back(instruction_bits(program.at(index), index));
    report.total_bits += report.instruction_bits.back();
  }
  report.padding_bits = (8 - report.total_bits % 8) % 8;
  report.padded_bytes = (report.total_bits + report.padding_bits) / 8;
  for (auto level : {qrio::EcLevel::L, qrio::EcLevel::M, qrio::EcLevel::Q, qrio::EcLevel::H}) {
    for (int version = qrio::kMinVersion; version <= qrio::kMaxVersion; ++version) {
      const std::size_t capacity = qrio::byte_capacity(version, level);
      report.capacity.push_back({version, level, capacity,
                                 static_cast<long long>(capacity) - static_cast<long long>(report.padded_bytes)});
    }
  }
  return report;
}

std::string format_size_report(const SizeReport& report) {
  std::ostringstream out;
  out << "instructions: " << report.instruction_bits.size() << "\n";
  for (std::size_t i = 0; i < report.instruction_bits.size(); ++i) {
    out << "  (" << i + 1 << ") " << report.instruction_bits[i] << " bits\n";
  }
  out << "header: " << report.header_bits << " bits\n"
      << "total: " << report.total_bits << " bits\n"
      << "padding: " << report.padding_bits << " bits\n"
      << "payload: " << report.padded_bytes << " bytes\n";
  for (auto level : {qrio::EcLevel::L, qrio::EcLevel::M, qrio::EcLevel::Q, qrio::EcLevel::H}) {
    const int version = report.smallest_version(level);
    out << "ec " << qrio::to_string(level) << ": ";
    if (version == 0) {
      out << "does not fit (max " << qrio::byte_capacity(qrio::kMaxVersion, level) << " bytes)\n";
    } else {
      const std::size_t capacity = qrio::byte_capacity(version, level);
      out << "version " << version << " (" << capacity - report.padded_bytes << " of " << capacity
          << " bytes free)\n";
    }
  }
  return out.str();
}

}  // namespace qrscript
