#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qrscript/bitstream.hpp"

namespace qrscript {

/// The seven DTD instructions. Values are their 3-bit opcodes; 0b111 is reserved.
enum class Opcode : std::uint8_t {
  Input = 0b000,
  Inputs = 0b001,
  Print = 0b010,
  Printex = 0b011,
  Goto = 0b100,
  If = 0b101,
  Ifc = 0b110,
};

/// Values are the 3-bit codes used in the bytecode.
enum class RelOp : std::uint8_t {
  Eq = 0b000,
  Ne = 0b001,
  Le = 0b010,
  Ge = 0b011,
  Lt = 0b100,
  Gt = 0b101,
};

std::string_view to_string(Opcode op);
std::string_view to_string(RelOp op);
std::optional<Opcode> opcode_from_string(std::string_view text);
std::optional<RelOp> rel_op_from_string(std::string_view text);

/// Number of a string printed on the sticker next to the QR code.
struct Reference {
  std::uint64_t number = 0;
  friend bool operator==(const Reference&, const Reference&) = default;
};

/// A 7-bit string literal or a reference.
using Constant = std::variant<std::string, Reference>;

/// Right-hand side of an ifc comparison.
using Operand = std::variant<std::int32_t, Half>;

/// One three-address instruction. Which optional fields are set depends on the
/// opcode; Program validation checks the combination.
struct Quadruple {
  Opcode opcode = Opcode::Printex;
  std::optional<Constant> constant;
  std::optional<RelOp> rel_op;
  std::optional<Operand> operand;
  /// 1-based absolute index of the jump destination.
  std::optional<std::size_t> target;

  static Quadruple input(Constant c) { return {Opcode::Input, std::move(c), {}, {}, {}}; }
  static Quadruple inputs(Constant c) { return {Opcode::Inputs, std::move(c), {}, {}, {}}; }
  static Quadruple print(Constant c) { return {Opcode::Print, std::move(c), {}, {}, {}}; }
  static Quadruple printex(Constant c) { return {Opcode::Printex, std::move(c), {}, {}, {}}; }
  static Quadruple jump(std::size_t target) { return {Opcode::Goto, {}, {}, {}, target}; }
  static Quadruple if_equal(Constant c, std::size_t target) { return {Opcode::If, std::move(c), {}, {}, target}; }
  static Quadruple if_compare(RelOp op, Operand value, std::size_t target) {
    return {Opcode::Ifc, {}, op, value, target};
  }

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

/// Ordered instruction list, addressed 1-based like the textual form.
struct Program {
  std::vector<Quadruple> instructions;

  std::size_t size() const noexcept { return instructions.size(); }
  bool empty() const noexcept { return instructions.empty(); }
  /// 1-based access.
  const Quadruple& at(std::size_t index) const { return instructions.at(index - 1); }

  friend bool operator==(const Program&, const Program&) = default;
};

struct Violation {
  enum class Kind {
    BackwardJump,
    TargetOutOfRange,
    MissingTarget,
    MissingField,
    UnexpectedField,
    NonAsciiCharacter,
  };

  std::size_t index = 0;  // 1-based instruction index
  Kind kind = Kind::MissingField;
  std::string message;
};

/// Lists every structural problem; an empty result means the program is valid.
std::vector<Violation> validate(const Program& program);
bool is_valid(const Program& program);
/// Throws InvalidProgramError describing the first violation, if any.
void require_valid(const Program& program);

/// Renders one instruction per line as "(n) opcode args".
std::string format_tac(const Program& program);
std::string format_instruction(const Quadruple& q, std::size_t index);
/// Shortest decimal spelling of a half value that reads back as the same
/// pattern; always contains '.', an exponent, or a non-finite name.
std::string format_half(Half value);

/// Inverse of format_tac. Throws TacParseError on malformed input.
Program parse_tac(std::string_view text);

}  // namespace qrscript
