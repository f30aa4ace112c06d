#include "qrscript/ir.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "qrscript/error.hpp"

namespace qrscript {

namespace {

constexpr std::array<std::string_view, 7> kOpcodeNames = {"input", "inputs", "print", "printex",
                                                          "goto",  "if",     "ifc"};
constexpr std::array<std::string_view, 6> kRelOpNames = {"==", "!=", "<=", ">=", "<", ">"};

bool takes_constant(Opcode op) { return op != Opcode::Goto && op != Opcode::Ifc; }
bool takes_target(Opcode op) { return op == Opcode::Goto || op == Opcode::If || op == Opcode::Ifc; }

void append_quoted(std::string& out, const std::string& text) {
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          char buf[5];
          std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void append_constant(std::string& out, const Constant& c) {
  if (const auto* text = std::get_if<std::string>(&c)) {
    append_quoted(out, *text);
  } else {
    out += std::to_string(std::get<Reference>(c).number);
  }
}

// Cursor over one line of TAC text.
class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const { throw TacParseError(what, line_no_, pos_ + 1); }

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= line_.size() || line_[pos_] == '#';
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    return line_.substr(start, pos_ - start);
  }

  std::size_t label() {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != '(') fail("expected '(' label");
    ++pos_;
    const std::size_t start = pos_;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + start, line_.data() + pos_, value);
    if (ec != std::errc{} || ptr == line_.data() + start) fail("expected label number");
    if (pos_ >= line_.size() || line_[pos_] != ')') fail("expected ')' after label");
    ++pos_;
    return value;
  }

  Constant constant() {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + start, line_.data() + pos_, value);
    if (ec != std::errc{} || ptr == line_.data() + start) fail("expected string or reference");
    return Reference{value};
  }

  Operand operand() {
    const std::string_view token = word();
    if (token.empty()) fail("expected numeric operand");
    const bool is_float = token.find_first_of(".eEnN") != std::string_view::npos;
    if (is_float) {
      const std::string copy(token);
      char* end = nullptr;
      const double value = std::strtod(copy.c_str(), &end);
      if (end != copy.c_str() + copy.size()) fail("malformed float operand '" + copy + "'");
      return Half::from_double(value);
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) fail("malformed integer operand");
    if (value < std::numeric_limits<std::int32_t>::min() || value > std::numeric_limits<std::int32_t>::max()) {
      fail("integer operand out of 32-bit range");
    }
    return static_cast<std::int32_t>(value);
  }

 private:
  std::string quoted() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= line_.size()) fail("unterminated string");
      const char c = line_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= line_.size()) fail("unterminated escape");
      const char e = line_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'x': {
          if (pos_ + 2 > line_.size()) fail("short \\x escape");
          unsigned value = 0;
          auto [ptr, ec] = std::from_chars(line_.data() + pos_, line_.data() + pos_ + 2, value, 16);
          if (ec != std::errc{} || ptr != line_.data() + pos_ + 2) fail("malformed \\x escape");
          out.push_back(static_cast<char>(value));
          pos_ += 2;
          break;
        }
        default: fail(std::string("unknown escape \\") + e);
      }
    }
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(Opcode op) { return kOpcodeNames.at(static_cast<std::size_t>(op)); }
std::string_view to_string(RelOp op) { return kRelOpNames.at(static_cast<std::size_t>(op)); }

std::optional<Opcode> opcode_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kOpcodeNames.size(); ++i) {
    if (kOpcodeNames[i] == text) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

std::optional<RelOp> rel_op_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kRelOpNames.size(); ++i) {
    if (kRelOpNames[i] == text) return static_cast<RelOp>(i);
  }
  return std::nullopt;
}

std::vector<Violation> validate(const Program& program) {
  std::vector<Violation> report;
  const std::size_t end = program.size() + 1;
  for (std::size_t index = 1; index <= program.size(); ++index) {
    const Quadruple& q = program.at(index);
    const auto name = std::string(to_string(q.opcode));
    auto add = [&](Violation::Kind kind, std::string message) {
      report.push_back({index, kind, name + ": " + std::move(message)});
    };

    if (takes_constant(q.opcode) && !q.constant) add(Violation::Kind::MissingField, "missing constant");
    if (!takes_constant(q.opcode) && q.constant) add(Violation::Kind::UnexpectedField, "unexpected constant");
    const bool is_ifc = q.opcode == Opcode::Ifc;
    if (is_ifc && !q.rel_op) add(Violation::Kind::MissingField, "missing relational operator");
    if (is_ifc && !q.operand) add(Violation::Kind::MissingField, "missing operand");
    if (!is_ifc && q.rel_op) add(Violation::Kind::UnexpectedField, "unexpected relational operator");
    if (!is_ifc && q.operand) add(Violation::Kind::UnexpectedField, "unexpected operand");

    if (takes_target(q.opcode)) {
      if (!q.target) {
        add(Violation::Kind::MissingTarget, "missing target");
      } else if (*q.target <= index) {
        add(Violation::Kind::BackwardJump, "backward jump to (" + std::to_string(*q.target) + ")");
      } else if (*q.target > end) {
        add(Violation::Kind::TargetOutOfRange, "target (" + std::to_string(*q.target) + ") out of range");
      }
    } else if (q.target) {
      add(Violation::Kind::UnexpectedField, "unexpected target");
    }

    if (q.constant) {
      if (const auto* text = std::get_if<std::string>(&*q.constant)) {
        for (char c : *text) {
          if (static_cast<unsigned char>(c) > 127) {
            add(Violation::Kind::NonAsciiCharacter, "non 7-bit character in string");
            break;
          }
        }
      }
    }
  }
  return report;
}

bool is_valid(const Program& program) { return validate(program).empty(); }

void require_valid(const Program& program) {
  const auto report = validate(program);
  if (!report.empty()) {
    throw InvalidProgramError("invalid program at (" + std::to_string(report.front().index) +
                              "): " + report.front().message);
  }
}

std::string format_half(Half value) {
  const double v = value.to_double();
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (Half::from_double(std::strtod(buf, nullptr)) == value) break;
  }
  std::string out(buf);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string format_instruction(const Quadruple& q, std::size_t index) {
  std::string out = "(" + std::to_string(index) + ") ";
  out += to_string(q.opcode);
  if (q.rel_op) {
    out += ' ';
    out += to_string(*q.rel_op);
  }
  if (q.operand) {
    out += ' ';
    if (const auto* i = std::get_if<std::int32_t>(&*q.operand)) {
      out += std::to_string(*i);
    } else {
      out += format_half(std::get<Half>(*q.operand));
    }
  }
  if (q.constant) {
    out += ' ';
    append_constant(out, *q.constant);
  }
  if (q.target) out += " (" + std::to_string(*q.target) + ")";
  return out;
}

std::string format_tac(const Program& program) {
  std::string out;
  for (std::size_t index = 1; index <= program.size(); ++index) {
    out += format_instruction(program.at(index), index);
    out += '\n';
  }
  return out;
}

Program parse_tac(std::string_view text) {
  Program program;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    LineReader reader(line, line_no);
    if (reader.at_end()) continue;

    const std::size_t index = reader.label();
    if (index != program.size() + 1) {
      reader.fail("expected instruction (" + std::to_string(program.size() + 1) + "), found (" +
                  std::to_string(index) + ")");
    }
    const std::string_view mnemonic = reader.word();
    const auto opcode = opcode_from_string(mnemonic);
    if (!opcode) reader.fail("unknown instruction '" + std::string(mnemonic) + "'");

    Quadruple q;
    q.opcode = *opcode;
    switch (*opcode) {
      case Opcode::Input:
      case Opcode::Inputs:
      case Opcode::Print:
      case Opcode::Printex: q.constant = reader.constant(); break;
      case Opcode::Goto: q.target = reader.label(); break;
      case Opcode::If:
        q.constant = reader.constant();
        q.target = reader.label();
        break;
      case Opcode::Ifc: {
        const std::string_view op_text = reader.word();
        q.rel_op = rel_op_from_string(op_text);
        if (!q.rel_op) reader.fail("unknown relational operator '" + std::string(op_text) + "'");
        q.operand = reader.operand();
        q.target = reader.label();
        break;
      }
    }
    if (!reader.at_end()) reader.fail("unexpected trailing text");
    program.instructions.push_back(std::move(q));
  }
  return program;
}

}  // namespace qrscript
