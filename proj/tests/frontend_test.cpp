#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "qrscript/error.hpp"
#include "qrscript/frontend.hpp"
#include "qrscript/vm.hpp"

using namespace qrscript;
using frontend::TokenKind;

namespace {

std::vector<TokenKind> kinds(std::string_view source) {
  std::vector<TokenKind> out;
  for (const auto& t : frontend::tokenize(source)) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST(Lexer, Keywords) {
  EXPECT_EQ(kinds("if \"No\":"),
            (std::vector{TokenKind::If, TokenKind::String, TokenKind::Colon, TokenKind::Newline, TokenKind::End}));
  const auto tokens = frontend::tokenize("if <= 100:");
  ASSERT_EQ(tokens.size(), 6u);
  EXPECT_EQ(tokens[1].kind, TokenKind::RelOp);
  EXPECT_EQ(tokens[1].text, "<=");
  EXPECT_EQ(tokens[2].kind, TokenKind::Integer);
  EXPECT_EQ(tokens[2].text, "100");

  const auto ref = frontend::tokenize("input 1");
  EXPECT_EQ(ref[0].kind, TokenKind::Input);
  EXPECT_EQ(ref[1].kind, TokenKind::Integer);
}

TEST(Lexer, IndentationAndComments) {
  EXPECT_EQ(kinds("if \"a\":  # note\n    print \"x\"\n\n# only a comment\nprintex \"\"\n"),
            (std::vector{TokenKind::If, TokenKind::String, TokenKind::Colon, TokenKind::Newline, TokenKind::Indent,
                         TokenKind::Print, TokenKind::String, TokenKind::Newline, TokenKind::Dedent,
                         TokenKind::Printex, TokenKind::String, TokenKind::Newline, TokenKind::End}));
}

TEST(Lexer, Errors) {
  EXPECT_THROW(frontend::tokenize("if \"a\":\n\tprint \"x\"\n"), LexError);
  EXPECT_THROW(frontend::tokenize("if \"a\":\n        print \"x\"\n    print \"y\"\n"), LexError);
  EXPECT_THROW(frontend::tokenize("print \"caf\xC3\xA9\"\n"), LexError);
  EXPECT_THROW(frontend::tokenize("print \"open\n"), LexError);
  try {
    frontend::tokenize("print \"x\"\nprint @\n");
    FAIL();
  } catch (const LexError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 7u);
  }
}

TEST(Parser, EthernetBranch) {
  const auto ast = frontend::parse(frontend::tokenize(fixtures::kNetworkSource));
  ASSERT_EQ(ast.statements.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<frontend::InputStmt>(ast.statements[0].node));
  const auto& ethernet = std::get<frontend::IfClause>(ast.statements[1].node);
  EXPECT_EQ(std::get<frontend::StringEq>(ethernet.condition).text, "Ethernet");
  ASSERT_EQ(ethernet.body.size(), 5u);
  const auto& speed = std::get<frontend::IfClause>(ethernet.body[3].node);
  const auto& cmp = std::get<frontend::Compare>(speed.condition);
  EXPECT_EQ(cmp.op, RelOp::Le);
  EXPECT_EQ(std::get<std::int32_t>(cmp.value), 100);
}

TEST(Parser, Errors) {
  EXPECT_EQ(frontend::parse(frontend::tokenize("printex \"done\"")).statements.size(), 1u);
  EXPECT_THROW(frontend::compile("if \"x\":\n"), SyntaxError);
  EXPECT_THROW(frontend::compile("if \"x\":\nprint \"y\"\n"), SyntaxError);
  EXPECT_THROW(frontend::compile("print\n"), SyntaxError);
  EXPECT_THROW(frontend::compile("if \"x\"\n    print \"y\"\n"), SyntaxError);
  EXPECT_THROW(frontend::compile("    print \"y\"\n"), SyntaxError);
  try {
    frontend::compile("");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("empty program"), std::string::npos);
  }
  EXPECT_THROW(frontend::compile("# nothing\n\n"), SyntaxError);
}

TEST(Lowering, ReferenceListing) {
  const Program p = frontend::compile(fixtures::kNetworkSource);
  ASSERT_EQ(p.size(), 25u);
  EXPECT_EQ(fixtures::normalize_listing(format_tac(p), 14), fixtures::normalize_listing(fixtures::kEthernetListing));
  EXPECT_EQ(p.at(25), Quadruple::printex(std::string()));
  EXPECT_TRUE(validate(p).empty());
}

TEST(Lowering, Terminators) {
  const Program single = frontend::compile("printex \"x\"\n");
  ASSERT_EQ(single.size(), 1u);

  const Program open = frontend::compile("input \"q\"\n");
  ASSERT_EQ(open.size(), 2u);
  EXPECT_EQ(open.at(2), Quadruple::printex(std::string()));
}

TEST(Lowering, NestedChainJumpsPastParentBlock) {
  // The inner block ends in an if-chain rather than printex, so control can
  // fall out of it and it must jump past its sibling blocks.
  const Program p = frontend::compile(
      "input \"a\"\n"
      "if \"x\":\n"
      "    input \"b\"\n"
      "    if \"y\":\n"
      "        printex \"xy\"\n"
      "if \"z\":\n"
      "    printex \"z\"\n"
      "printex \"end\"\n");
  EXPECT_TRUE(validate(p).empty());
  const auto last = [](const std::vector<SessionEvent>& events) { return events.back(); };
  EXPECT_EQ(last(run_script(p, {"x", "y"})).message, "xy");
  EXPECT_EQ(last(run_script(p, {"x", "n"})).message, "end");
  EXPECT_EQ(last(run_script(p, {"z"})).message, "z");
  EXPECT_EQ(last(run_script(p, {"q"})).message, "end");
}

TEST(Lowering, FuzzedSourcesAreValidForwardAndDeterministic) {
  oracle::ProgramGenerator gen(5);
  for (int i = 0; i < 500; ++i) {
    const std::string source = gen.source(3);
    const Program p = frontend::compile(source);
    ASSERT_TRUE(validate(p).empty()) << source;
    for (std::size_t k = 1; k <= p.size(); ++k) {
      if (p.at(k).target) ASSERT_GT(*p.at(k).target, k) << source;
    }
    ASSERT_EQ(frontend::compile(source), p);
  }
}
