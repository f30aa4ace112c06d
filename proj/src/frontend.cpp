#include "qrscript/frontend.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "qrscript/error.hpp"

namespace qrscript::frontend {

namespace {

struct Keyword {
  std::string_view spelling;
  TokenKind kind;
};

constexpr std::array<Keyword, 5> kKeywords = {{
    {"input", TokenKind::Input},
    {"inputs", TokenKind::Inputs},
    {"print", TokenKind::Print},
    {"printex", TokenKind::Printex},
    {"if", TokenKind::If},
}};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  std::vector<Token> run() {
    std::size_t line_no = 0;
    std::string_view rest = source_;
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lex_line(line, line_no);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, "", line_no + 1, 1);
    }
    emit(TokenKind::End, "", line_no + 1, 1);
    return std::move(tokens_);
  }

 private:
  void emit(TokenKind kind, std::string text, std::size_t line, std::size_t column) {
    tokens_.push_back({kind, std::move(text), line, column});
  }

  void lex_line(std::string_view line, std::size_t line_no) {
    std::size_t width = 0;
    while (width < line.size() && (line[width] == ' ' || line[width] == '\t')) {
      if (line[width] == '\t') throw LexError("tab character in indentation", line_no, width + 1);
      ++width;
    }
    if (width == line.size() || line[width] == '#') return;  // blank or comment-only

    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(TokenKind::Indent, "", line_no, 1);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(TokenKind::Dedent, "", line_no, 1);
      }
      if (width != indents_.back()) throw LexError("inconsistent dedent", line_no, width + 1);
    }

    std::size_t pos = width;
    while (pos < line.size()) {
      const char c = line[pos];
      const std::size_t column = pos + 1;
      if (c == ' ' || c == '\t') {
        ++pos;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        emit(TokenKind::String, string_literal(line, pos, line_no), line_no, column);
      } else if (c == ':') {
        emit(TokenKind::Colon, ":", line_no, column);
        ++pos;
      } else if (c == '=' || c == '!' || c == '<' || c == '>') {
        const bool two = pos + 1 < line.size() && line[pos + 1] == '=';
        if (!two && (c == '=' || c == '!')) {
          throw LexError(std::string("unexpected character '") + c + "'", line_no, column);
        }
        emit(TokenKind::RelOp, std::string(line.substr(pos, two ? 2 : 1)), line_no, column);
        pos += two ? 2 : 1;
      } else if (starts_number(line, pos)) {
        number(line, pos, line_no);
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos;
        while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_')) ++pos;
        const std::string_view word = line.substr(start, pos - start);
        bool found = false;
        for (const auto& kw : kKeywords) {
          if (kw.spelling == word) {
            emit(kw.kind, std::string(word), line_no, column);
            found = true;
          }
        }
        if (!found) throw LexError("unknown word '" + std::string(word) + "'", line_no, column);
      } else {
        throw LexError(std::string("unexpected character '") + c + "'", line_no, column);
      }
    }
    emit(TokenKind::Newline, "", line_no, line.size() + 1);
  }

  static bool starts_number(std::string_view line, std::size_t pos) {
    auto digit_at = [&](std::size_t i) { return i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])); };
    const char c = line[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    if (c == '.') return digit_at(pos + 1);
    if (c == '-' || c == '+') return digit_at(pos + 1) || (pos + 1 < line.size() && line[pos + 1] == '.' && digit_at(pos + 2));
    return false;
  }

  void number(std::string_view line, std::size_t& pos, std::size_t line_no) {
    const std::size_t start = pos;
    bool plain = true;
    auto digits = [&] {
      while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    };
    if (line[pos] == '-' || line[pos] == '+') {
      plain = false;
      ++pos;
    }
    digits();
    if (pos < line.size() && line[pos] == '.') {
      plain = false;
      ++pos;
      digits();
    }
    if (pos < line.size() && (line[pos] == 'e' || line[pos] == 'E')) {
      plain = false;
      ++pos;
      if (pos < line.size() && (line[pos] == '-' || line[pos] == '+')) ++pos;
      const std::size_t exp_start = pos;
      digits();
      if (pos == exp_start) throw LexError("malformed exponent", line_no, start + 1);
    }
    if (pos < line.size() && (std::isalpha(static_cast<unsigned char>(line[pos])) || line[pos] == '_')) {
      throw LexError("malformed number", line_no, start + 1);
    }
    emit(plain ? TokenKind::Integer : TokenKind::Number, std::string(line.substr(start, pos - start)), line_no,
         start + 1);
  }

  static std::string string_literal(std::string_view line, std::size_t& pos, std::size_t line_no) {
    const std::size_t start = pos++;
    std::string out;
    while (true) {
      if (pos >= line.size()) throw LexError("unterminated string", line_no, start + 1);
      const char c = line[pos++];
      if (static_cast<unsigned char>(c) > 127) {
        throw LexError("non 7-bit character in string", line_no, pos);
      }
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos >= line.size()) throw LexError("unterminated string", line_no, start + 1);
      const char e = line[pos++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: throw LexError(std::string("unknown escape \\") + e, line_no, pos - 1);
      }
    }
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> indents_{0};
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::End) {
      throw std::invalid_argument("token list must end with End");
    }
  }

  SourceAst run() {
    SourceAst ast;
    if (peek().kind == TokenKind::End) throw SyntaxError("empty program", peek().line, peek().column);
    while (peek().kind != TokenKind::End) ast.statements.push_back(statement());
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  const Token& take() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  [[noreturn]] static void unexpected(const Token& t, std::string_view wanted) {
    std::string found(to_string(t.kind));
    if (!t.text.empty() && t.kind != TokenKind::String) found += " '" + t.text + "'";
    throw SyntaxError("expected " + std::string(wanted) + ", found " + found, t.line, t.column);
  }

  const Token& expect(TokenKind kind, std::string_view wanted) {
    if (peek().kind != kind) unexpected(peek(), wanted);
    return take();
  }

  Statement statement() {
    const Token& head = peek();
    switch (head.kind) {
      case TokenKind::Input:
      case TokenKind::Inputs: {
        take();
        InputStmt s{head.kind == TokenKind::Inputs, constant()};
        expect(TokenKind::Newline, "end of line");
        return {std::move(s), head.line};
      }
      case TokenKind::Print:
      case TokenKind::Printex: {
        take();
        OutputStmt s{head.kind == TokenKind::Printex, constant()};
        expect(TokenKind::Newline, "end of line");
        return {std::move(s), head.line};
      }
      case TokenKind::If: return if_clause();
      case TokenKind::Indent: throw SyntaxError("unexpected indent", head.line, head.column);
      default: unexpected(head, "statement");
    }
  }

  Statement if_clause() {
    const Token& head = take();
    IfClause clause;
    if (peek().kind == TokenKind::String) {
      clause.condition = StringEq{take().text};
    } else if (peek().kind == TokenKind::RelOp) {
      const Token& op = take();
      clause.condition = Compare{*rel_op_from_string(op.text), operand()};
    } else {
      unexpected(peek(), "string or comparison after 'if'");
    }
    expect(TokenKind::Colon, "':'");
    expect(TokenKind::Newline, "end of line after ':'");
    if (peek().kind != TokenKind::Indent) throw SyntaxError("empty block", head.line, head.column);
    take();
    while (peek().kind != TokenKind::Dedent && peek().kind != TokenKind::End) {
      clause.body.push_back(statement());
    }
    expect(TokenKind::Dedent, "end of block");
    return {std::move(clause), head.line};
  }

  Constant constant() {
    const Token& t = peek();
    if (t.kind == TokenKind::String) return take().text;
    if (t.kind == TokenKind::Integer) {
      take();
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec != std::errc{}) throw SyntaxError("reference number too large", t.line, t.column);
      return Reference{value};
    }
    unexpected(t, "string or reference number");
  }

  Operand operand() {
    const Token& t = peek();
    if (t.kind != TokenKind::Integer && t.kind != TokenKind::Number) unexpected(t, "number");
    take();
    if (t.text.find_first_of(".eE") != std::string::npos) {
      return Half::from_double(std::strtod(t.text.c_str(), nullptr));
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data() + (t.text[0] == '+' ? 1 : 0), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || value < std::numeric_limits<std::int32_t>::min() ||
        value > std::numeric_limits<std::int32_t>::max()) {
      throw SyntaxError("integer operand out of 32-bit range", t.line, t.column);
    }
    return static_cast<std::int32_t>(value);
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

class Lowerer {
 public:
  Program run(const SourceAst& ast) {
    if (lower_block(ast.statements)) emit(Quadruple::printex(std::string{}));
    return std::move(program_);
  }

 private:
  std::size_t next_index() const { return program_.size() + 1; }

  std::size_t emit(Quadruple q) {
    program_.instructions.push_back(std::move(q));
    return program_.size();
  }

  void patch(std::size_t index, std::size_t target) { program_.instructions[index - 1].target = target; }

  // Returns true when control can reach the end of the block.
  bool lower_block(const Block& block) {
    bool falls_through = true;
    for (std::size_t i = 0; i < block.size();) {
      if (std::holds_alternative<IfClause>(block[i].node)) {
        std::size_t end = i;
        while (end < block.size() && std::holds_alternative<IfClause>(block[end].node)) ++end;
        lower_chain(block, i, end);
        falls_through = true;
        i = end;
        continue;
      }
      if (const auto* in = std::get_if<InputStmt>(&block[i].node)) {
        emit(in->direct ? Quadruple::inputs(in->constant) : Quadruple::input(in->constant));
        falls_through = true;
      } else {
        const auto& out = std::get<OutputStmt>(block[i].node);
        emit(out.terminal ? Quadruple::printex(out.constant) : Quadruple::print(out.constant));
        falls_through = !out.terminal;
      }
      ++i;
    }
    return falls_through;
  }

  // Conditions first, then one goto to the continuation, then the bodies.
  void lower_chain(const Block& block, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> conditions;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& clause = std::get<IfClause>(block[i].node);
      if (const auto* eq = std::get_if<StringEq>(&clause.condition)) {
        conditions.push_back(emit(Quadruple::if_equal(eq->text, 0)));
      } else {
        const auto& cmp = std::get<Compare>(clause.condition);
        conditions.push_back(emit(Quadruple::if_compare(cmp.op, cmp.value, 0)));
      }
    }
    std::vector<std::size_t> to_continuation{emit(Quadruple::jump(0))};
    for (std::size_t i = begin; i < end; ++i) {
      patch(conditions[i - begin], next_index());
      if (lower_block(std::get<IfClause>(block[i].node).body)) {
        to_continuation.push_back(emit(Quadruple::jump(0)));
      }
    }
    const std::size_t continuation = next_index();
    for (std::size_t index : to_continuation) patch(index, continuation);
  }

  Program program_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Input: return "input";
    case TokenKind::Inputs: return "inputs";
    case TokenKind::Print: return "print";
    case TokenKind::Printex: return "printex";
    case TokenKind::If: return "if";
    case TokenKind::String: return "string";
    case TokenKind::Integer: return "integer";
    case TokenKind::Number: return "number";
    case TokenKind::RelOp: return "relational operator";
    case TokenKind::Colon: return "':'";
    case TokenKind::Newline: return "end of line";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::End: return "end of file";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

SourceAst parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

Program lower(const SourceAst& ast) { return Lowerer{}.run(ast); }

Program compile(std::string_view source) { return lower(parse(tokenize(source))); }

}  // namespace qrscript::frontend
