#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qrscript/ir.hpp"

namespace qrscript::frontend {

enum class TokenKind {
  Input,
  Inputs,
  Print,
  Printex,
  If,
  String,
  Integer,  // unsigned decimal literal: a reference or an integer operand
  Number,   // signed or fractional literal: operand only
  RelOp,
  Colon,
  Newline,
  Indent,
  Dedent,
  End,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // decoded literal for strings, spelling otherwise
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Splits source text into tokens with synthetic Indent/Dedent/Newline
/// tokens. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

// Syntax tree of a source file.

struct Statement;
using Block = std::vector<Statement>;

struct InputStmt {
  bool direct = false;  // `inputs`
  Constant constant;
};

struct OutputStmt {
  bool terminal = false;  // `printex`
  Constant constant;
};

struct StringEq {
  std::string text;
};

struct Compare {
  RelOp op = RelOp::Eq;
  Operand value;
};

struct IfClause {
  std::variant<StringEq, Compare> condition;
  Block body;
};

struct Statement {
  std::variant<InputStmt, OutputStmt, IfClause> node;
  std::size_t line = 0;
};

struct SourceAst {
  Block statements;
};

/// Recursive descent over the token list. Throws SyntaxError.
SourceAst parse(const std::vector<Token>& tokens);

/// Lowers to three-address code, back-patching forward jumps.
Program lower(const SourceAst& ast);

/// tokenize + parse + lower.
Program compile(std::string_view source);

}  // namespace qrscript::frontend
