#pragma once

// Reference computations written independently of the library, used to check it.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qrscript/ir.hpp"

namespace oracle {

/// Closed form of the chained-saturation length: one chunk per full
/// saturation plus the terminating chunk.
inline std::size_t ext_uint_bits(std::uint64_t n, unsigned width) {
  const std::uint64_t saturated = (std::uint64_t{1} << width) - 1;
  return width * (n / saturated + 1);
}

/// Reads chunks off a '0'/'1' string and sums them.
inline std::uint64_t ext_uint_from_text(const std::string& bits, unsigned width, std::size_t* used = nullptr) {
  const std::uint64_t saturated = (std::uint64_t{1} << width) - 1;
  std::uint64_t total = 0;
  std::size_t pos = 0;
  for (;;) {
    std::uint64_t chunk = 0;
    for (unsigned i = 0; i < width; ++i) chunk = chunk * 2 + (bits.at(pos++) == '1');
    total += chunk;
    if (chunk != saturated) break;
  }
  if (used) *used = pos;
  return total;
}

/// Two's complement text of `value` on `width` bits, by repeated division.
inline std::string twos_complement(std::int64_t value, unsigned width) {
  std::uint64_t v = value < 0 ? (std::uint64_t{1} << width) - static_cast<std::uint64_t>(-value)
                              : static_cast<std::uint64_t>(value);
  std::string out(width, '0');
  for (unsigned i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<char>('0' + v % 2);
    v /= 2;
  }
  return out;
}

/// Exact value of a finite binary16 pattern from its fields.
inline double half_value(std::uint16_t p) {
  const int sign = p >> 15;
  const int exponent = (p >> 10) & 0x1F;
  const int mantissa = p & 0x3FF;
  double magnitude = exponent == 0 ? mantissa * std::pow(2.0, -24)
                                   : (1024 + mantissa) * std::pow(2.0, exponent - 25);
  return sign ? -magnitude : magnitude;
}

/// Nearest binary16 pattern by exhaustive search over finite patterns, ties
/// to the even mantissa, overflow to infinity at the midpoint beyond 65504.
inline std::uint16_t half_nearest(double x) {
  if (std::isnan(x)) return 0x7E00;
  const std::uint16_t sign = std::signbit(x) ? 0x8000 : 0;
  const double a = std::fabs(x);
  if (a >= 65520.0) return sign | 0x7C00;
  std::uint16_t best = 0;
  double best_err = INFINITY;
  for (std::uint16_t p = 0; p < 0x7C00; ++p) {
    const double err = std::fabs(half_value(p) - a);
    if (err < best_err || (err == best_err && (p & 1) == 0)) {
      best = p;
      best_err = err;
    }
  }
  return sign | best;
}

/// Per-field bit widths of one instruction, summed from the layout table.
inline std::size_t constant_bits(const qrscript::Constant& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return 1 + 1 + ext_uint_bits(s->size(), 4) + 7 * s->size();
  return 1 + ext_uint_bits(std::get<qrscript::Reference>(c).number, 4);
}

inline std::size_t audit_bits(const qrscript::Quadruple& q, std::size_t index) {
  using qrscript::Opcode;
  const std::size_t opcode = 3;
  const auto jump = [&] { return ext_uint_bits(*q.target - index - 1, 4); };
  switch (q.opcode) {
    case Opcode::Input:
    case Opcode::Inputs:
    case Opcode::Print:
    case Opcode::Printex: return opcode + constant_bits(*q.constant);
    case Opcode::Goto: return opcode + jump();
    case Opcode::If: return opcode + constant_bits(*q.constant) + jump();
    case Opcode::Ifc: {
      std::size_t operand = 16;
      if (const auto* i = std::get_if<std::int32_t>(&*q.operand)) {
        operand = 1 + ((*i >= -32768 && *i <= 32767) ? 16 : 32);
      }
      return opcode + 3 + 1 + operand + jump();
    }
  }
  return 0;
}

/// Random valid programs with forward jumps, ending in printex so that no
/// trailing goto can be confused with padding.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string text(std::size_t max_len) {
    std::size_t len = pick(0, max_len);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<char>(pick(0, 127)));
    return s;
  }

  qrscript::Constant constant() {
    if (pick(0, 3) == 0) return qrscript::Reference{pick(0, 5) == 0 ? pick(0, 100000) : pick(0, 40)};
    return text(pick(0, 4) == 0 ? 70 : 12);
  }

  qrscript::Operand operand() {
    if (pick(0, 1) == 0) {
      switch (pick(0, 3)) {
        case 0: return static_cast<std::int32_t>(pick(0, 200)) - 100;
        case 1: return static_cast<std::int32_t>(static_cast<std::int64_t>(pick(0, 0xFFFFFFFF)) - 0x80000000LL);
        case 2: return std::int32_t{32767} + static_cast<std::int32_t>(pick(0, 2));
        default: return std::int32_t{-32768} - static_cast<std::int32_t>(pick(0, 2));
      }
    }
    qrscript::Half h{static_cast<std::uint16_t>(pick(0, 0xFFFF))};
    if (h.is_nan()) h.bits = qrscript::Half::kCanonicalNaN;
    return h;
  }

  qrscript::Program program(std::size_t max_len) {
    const std::size_t n = pick(1, max_len);
    qrscript::Program p;
    for (std::size_t i = 1; i <= n; ++i) {
      const auto target = [&] { return pick(i + 1, std::min(n + 1, i + 1 + (pick(0, 6) == 0 ? 40 : 4))); };
      if (i == n) {
        p.instructions.push_back(qrscript::Quadruple::printex(constant()));
        break;
      }
      switch (pick(0, 6)) {
        case 0: p.instructions.push_back(qrscript::Quadruple::input(constant())); break;
        case 1: p.instructions.push_back(qrscript::Quadruple::inputs(constant())); break;
        case 2: p.instructions.push_back(qrscript::Quadruple::print(constant())); break;
        case 3: p.instructions.push_back(qrscript::Quadruple::printex(constant())); break;
        case 4: p.instructions.push_back(qrscript::Quadruple::jump(target())); break;
        case 5: p.instructions.push_back(qrscript::Quadruple::if_equal(constant(), target())); break;
        default:
          p.instructions.push_back(qrscript::Quadruple::if_compare(static_cast<qrscript::RelOp>(pick(0, 5)), operand(),
                                                                   target()));
      }
    }
    return p;
  }

  /// Indentation-structured source in the surface language.
  std::string source(int max_depth) {
    std::string out;
    block(out, 0, max_depth, true);
    return out;
  }

  std::uint64_t pick(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::string literal() {
    std::string s = "\"";
    const std::size_t len = pick(0, 10);
    for (std::size_t i = 0; i < len; ++i) {
      char c = static_cast<char>(pick(32, 126));
      if (c == '"' || c == '\\') c = 'x';
      s.push_back(c);
    }
    return s + "\"";
  }

  std::string argument() { return pick(0, 4) == 0 ? std::to_string(pick(0, 300)) : literal(); }

  void block(std::string& out, int depth, int max_depth, bool top) {
    const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
    const std::size_t statements = pick(1, top ? 6 : 3);
    for (std::size_t s = 0; s < statements; ++s) {
      const auto kind = pick(0, depth < max_depth ? 5 : 3);
      static const char* const kSimple[] = {"input", "inputs", "print", "printex"};
      if (kind <= 3) {
        out += indent + kSimple[kind] + " " + argument() + "\n";
        if (kind == 3) return;
        continue;
      }
      const std::size_t clauses = pick(1, 3);
      for (std::size_t c = 0; c < clauses; ++c) {
        static const char* const kOps[] = {"==", "!=", "<=", ">=", "<", ">"};
        std::string condition;
        if (pick(0, 1) == 0) {
          condition = literal();
        } else {
          condition = std::string(kOps[pick(0, 5)]) + " ";
          condition += pick(0, 1) ? std::to_string(static_cast<std::int64_t>(pick(0, 200000)) - 100000)
                                  : std::to_string(pick(0, 99)) + "." + std::to_string(pick(0, 9));
        }
        out += indent + "if " + condition + ":\n";
        block(out, depth + 1, max_depth, false);
      }
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace oracle
