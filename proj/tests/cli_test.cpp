#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "qrscript/codec.hpp"

namespace fs = std::filesystem;
using qrscript::cli::ExitCode;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qrscript_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
    return path(name);
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static Result run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = qrscript::cli::run(std::move(args), in, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path compiled_network() {
    const auto src = write("example.dtd", fixtures::kNetworkSource);
    EXPECT_EQ(run({"compile", src.string(), "-o", path("example.qrb").string()}).code, ExitCode::kSuccess);
    return path("example.qrb");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CompileWritesPayloadAndReport) {
  const auto src = write("example.dtd", fixtures::kNetworkSource);
  const Result r = run({"compile", src.string(), "--tac"});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  EXPECT_TRUE(fs::exists(path("example.qrb")));
  EXPECT_NE(r.out.find("total: 2260 bits"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("payload: 283 bytes"), std::string::npos);
  EXPECT_EQ(fixtures::normalize_listing(read(path("example.tac")), 14),
            fixtures::normalize_listing(fixtures::kEthernetListing));
}

TEST_F(Cli, CompileErrors) {
  Result r = run({"compile", write("empty.dtd", "").string()});
  EXPECT_EQ(r.code, ExitCode::kCompileError);
  EXPECT_NE(r.err.find("empty program"), std::string::npos);
  r = run({"compile", write("tab.dtd", "if \"a\":\n\tprintex \"x\"\n").string()});
  EXPECT_EQ(r.code, ExitCode::kCompileError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"compile", path("missing.dtd").string()}).code, ExitCode::kUsage);
  EXPECT_EQ(run({}).code, ExitCode::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, ExitCode::kUsage);
}

TEST_F(Cli, DecompileAndFullLoop) {
  const auto qrb = compiled_network();
  const Result r = run({"decompile", qrb.string()});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  EXPECT_EQ(fixtures::normalize_listing(r.out, 14), fixtures::normalize_listing(fixtures::kEthernetListing));
  EXPECT_NE(r.err.find("dialect 0"), std::string::npos);

  // compile -> decompile -> parse -> encode gives the same bytes.
  const auto tac = write("round.tac", r.out);
  const auto payload = qrscript::encode_program(qrscript::parse_tac(read(tac)));
  EXPECT_EQ(std::string(payload.bytes.begin(), payload.bytes.end()), read(qrb));
  EXPECT_NE(run({"size", tac.string()}).out.find("payload: 283 bytes"), std::string::npos);
}

TEST_F(Cli, DecompileErrors) {
  Result r = run({"decompile", write("bad.qrb", std::string("\x1F\xFF\xFF", 3)).string()});
  EXPECT_EQ(r.code, ExitCode::kCodecError);
  r = run({"decompile", write("d7.qrb", std::string("\xE0", 1)).string()});
  EXPECT_EQ(r.code, ExitCode::kCodecError);
  EXPECT_NE(r.err.find("unsupported dialect 7"), std::string::npos);
  r = run({"decompile", write("cut.qrb", std::string("\x0C\x58\x20", 3)).string()});
  EXPECT_EQ(r.code, ExitCode::kCodecError);
  EXPECT_NE(r.err.find("malformed"), std::string::npos) << r.err;
}

TEST_F(Cli, RunAcceptsNumbersAndText) {
  const auto qrb = compiled_network();
  Result r = run({"run", qrb.string()}, "1\n1\n");
  EXPECT_EQ(r.code, ExitCode::kSuccess);
  EXPECT_NE(r.out.find("  4) Other"), std::string::npos);
  EXPECT_NE(r.out.find("Change Ethernet cable\n"), std::string::npos);

  r = run({"run", qrb.string()}, "Ethernet\nOther\n90\n");
  EXPECT_EQ(r.code, ExitCode::kSuccess);
  EXPECT_NE(r.out.find("Change Ethernet cable category"), std::string::npos);

  r = run({"run", qrb.string()}, "Ethernet\n2\n120\n");
  EXPECT_EQ(r.code, ExitCode::kSuccess);
  EXPECT_EQ(r.out.find("Change"), std::string::npos);
}

TEST_F(Cli, RunFailures) {
  const auto qrb = compiled_network();
  Result r = run({"run", qrb.string()}, "Ethernet\nOther\nabc\n");
  EXPECT_EQ(r.code, ExitCode::kRuntimeFailure);
  EXPECT_NE(r.err.find("conversion error"), std::string::npos);

  r = run({"run", qrb.string()}, "Ethernet\n");
  EXPECT_EQ(r.code, ExitCode::kRuntimeFailure);

  const auto sticker = path("sticker.qrb");
  ASSERT_EQ(run({"compile", QRSCRIPT_SAMPLES "/sticker.dtd", "-o", sticker.string()}).code, ExitCode::kSuccess);
  r = run({"run", sticker.string()}, "Yes\n");
  EXPECT_EQ(r.code, ExitCode::kRuntimeFailure);
  EXPECT_NE(r.err.find("unresolved reference 1"), std::string::npos);
  r = run({"run", sticker.string(), "--refs", QRSCRIPT_SAMPLES "/sticker.refs"}, "1\n");
  EXPECT_EQ(r.code, ExitCode::kSuccess) << r.err;
}

TEST_F(Cli, QrRoundTrip) {
  const auto qrb = compiled_network();
  const auto png = path("example.png");
  ASSERT_EQ(run({"qr", "encode", qrb.string(), "-o", png.string()}).code, ExitCode::kSuccess);
  const auto back = path("example2.qrb");
  const Result r = run({"qr", "decode", png.string(), "-o", back.string()});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  EXPECT_EQ(read(back), read(qrb));
  EXPECT_EQ(run({"qr", "encode", qrb.string(), "-o", png.string(), "--version", "12", "--ec", "m"}).code,
            ExitCode::kSuccess);
}

TEST_F(Cli, QrErrors) {
  const auto big = write("big.qrb", std::string(2954, 'x'));
  EXPECT_EQ(run({"qr", "encode", big.string(), "-o", path("big.png").string()}).code, ExitCode::kQrError);
  const auto mid = write("mid.qrb", std::string(1500, 'x'));
  EXPECT_EQ(run({"qr", "encode", mid.string(), "-o", path("mid.png").string()}).code, ExitCode::kSuccess);
  EXPECT_EQ(run({"qr", "encode", mid.string(), "-o", path("mid.png").string(), "--ec", "H"}).code, ExitCode::kQrError);
  EXPECT_EQ(run({"qr", "encode", mid.string(), "-o", path("x.png").string(), "--version", "41"}).code, ExitCode::kUsage);
  EXPECT_EQ(run({"qr", "decode", mid.string(), "-o", path("x.qrb").string()}).code, ExitCode::kQrError);
}
