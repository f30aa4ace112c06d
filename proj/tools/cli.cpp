#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

#include "qrscript/codec.hpp"
#include "qrscript/error.hpp"
#include "qrscript/frontend.hpp"
#include "qrscript/ir.hpp"
#include "qrscript/qrio.hpp"

namespace qrscript::cli {

namespace fs = std::filesystem;

namespace {

// Failure with a specific exit status.
struct Exit {
  int code;
  std::string message;
};

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kUsage, "cannot open " + path.string()};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Exit{kUsage, "cannot write " + path.string()};
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Program compile_file(const fs::path& path) {
  try {
    return frontend::compile(read_text(path));
  } catch (const SourceError& e) {
    throw Exit{kCompileError, path.string() + ": " + e.what()};
  }
}

DecodedProgram decode_file(const fs::path& path) {
  try {
    return decode_payload(read_bytes(path));
  } catch (const CodecError& e) {
    throw Exit{kCodecError, path.string() + ": " + e.what()};
  }
}

// .dtd sources are compiled, .tac listings parsed, anything else decoded as bytecode.
Program load_program(const fs::path& path) {
  if (path.extension() == ".dtd") return compile_file(path);
  if (path.extension() == ".tac") {
    try {
      return parse_tac(read_text(path));
    } catch (const SourceError& e) {
      throw Exit{kCompileError, path.string() + ": " + e.what()};
    }
  }
  return decode_file(path).program;
}

std::string trim(std::string text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.pop_back();
  std::size_t start = 0;
  while (start < text.size() && text[start] == ' ') ++start;
  return text.substr(start);
}

}  // namespace

int interact(Session& session, std::istream& in, std::ostream& out, std::ostream& err) {
  SessionEvent event = session.advance();
  for (;;) {
    switch (event.kind) {
      case SessionEvent::Kind::Output:
        out << event.message << "\n";
        if (event.terminal) return kSuccess;
        event = session.advance();
        continue;
      case SessionEvent::Kind::Terminated: return kSuccess;
      case SessionEvent::Kind::Failed: err << "error: " << event.reason << "\n"; return kRuntimeFailure;
      case SessionEvent::Kind::PromptChoice:
      case SessionEvent::Kind::PromptText: break;
    }

    out << event.message << "\n";
    if (event.kind == SessionEvent::Kind::PromptChoice) {
      for (std::size_t i = 0; i < event.options.size(); ++i) out << "  " << i + 1 << ") " << event.options[i] << "\n";
      out << "  " << event.options.size() + 1 << ") " << kOtherLabel << "\n";
    }
    out << "> " << std::flush;

    std::string line;
    if (!std::getline(in, line)) {
      err << "error: input closed before the program finished\n";
      return kRuntimeFailure;
    }
    std::string answer = event.kind == SessionEvent::Kind::PromptChoice ? trim(line) : line;
    if (!answer.empty() && answer.back() == '\r') answer.pop_back();
    if (event.kind == SessionEvent::Kind::PromptChoice) {
      std::size_t choice = 0;
      auto [ptr, ec] = std::from_chars(answer.data(), answer.data() + answer.size(), choice);
      if (ec == std::errc{} && ptr == answer.data() + answer.size() && choice >= 1 &&
          choice <= event.options.size() + 1) {
        answer = choice <= event.options.size() ? event.options[choice - 1] : std::string(kOtherLabel);
      }
    }
    event = session.submit_answer(std::move(answer));
  }
}

int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"QRscript decision-tree toolchain", "qrscript"};
  app.require_subcommand(1);

  fs::path input;
  fs::path output;
  bool emit_tac = false;
  auto* compile = app.add_subcommand("compile", "Compile a .dtd source into a .qrb payload");
  compile->add_option("input", input, "Source file")->required();
  compile->add_option("-o,--output", output, "Payload file (default: input with .qrb)");
  compile->add_flag("--tac", emit_tac, "Also write the three-address code next to the payload");

  auto* decompile = app.add_subcommand("decompile", "Print the three-address code of a payload");
  decompile->add_option("input", input, "Payload file")->required();

  fs::path refs_path;
  auto* run_cmd = app.add_subcommand("run", "Execute a payload interactively");
  run_cmd->add_option("input", input, "Payload file")->required();
  run_cmd->add_option("--refs", refs_path, "Reference table (n=text per line)");

  auto* qr = app.add_subcommand("qr", "Convert between payloads and QR images");
  qr->require_subcommand(1);
  std::string version_text = "auto";
  std::string ec_text = "L";
  auto* qr_encode = qr->add_subcommand("encode", "Render a payload as a PNG QR code");
  qr_encode->add_option("input", input, "Payload file")->required();
  qr_encode->add_option("-o,--output", output, "PNG file")->required();
  qr_encode->add_option("--version", version_text, "Symbol version 1-40 or auto");
  qr_encode->add_option("--ec", ec_text, "Error correction level L, M, Q or H");
  int mask = qrio::kAutoMask;
  qr_encode->add_option("--mask", mask, "Mask pattern 0-7 (default: lowest penalty)")->check(CLI::Range(0, 7));
  auto* qr_decode = qr->add_subcommand("decode", "Extract the payload from a PNG QR code");
  qr_decode->add_option("input", input, "PNG file")->required();
  qr_decode->add_option("-o,--output", output, "Payload file")->required();

  auto* size = app.add_subcommand("size", "Report the encoded size of a .dtd, .tac or .qrb file");
  size->add_option("input", input, "Program file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*compile) {
      const Program program = compile_file(input);
      if (output.empty()) output = fs::path(input).replace_extension(".qrb");
      const Payload payload = encode_program(program);
      write_bytes(output, payload.bytes);
      if (emit_tac) {
        const std::string tac = format_tac(program);
        write_bytes(fs::path(output).replace_extension(".tac"),
                    std::span(reinterpret_cast<const std::uint8_t*>(tac.data()), tac.size()));
      }
      out << format_size_report(measure(program));
      return kSuccess;
    }
    if (*decompile) {
      const DecodedProgram decoded = decode_file(input);
      err << "dialect " << decoded.dialect.value << " (decision tree)\n";
      out << format_tac(decoded.program);
      return kSuccess;
    }
    if (*run_cmd) {
      std::optional<ReferenceTable> refs;
      if (!refs_path.empty()) {
        try {
          refs = ReferenceTable::load(refs_path);
        } catch (const Error& e) {
          throw Exit{kUsage, refs_path.string() + ": " + e.what()};
        }
      }
      Session session(decode_file(input).program, std::move(refs));
      return interact(session, in, out, err);
    }
    if (*qr_encode) {
      qrio::QrConfig config;
      try {
        config.ec_level = qrio::ec_level_from_string(ec_text);
        if (version_text != "auto") {
          std::size_t used = 0;
          config.version = std::stoi(version_text, &used);
          if (used != version_text.size() || config.version < qrio::kMinVersion ||
              config.version > qrio::kMaxVersion) {
            throw std::invalid_argument("bad version");
          }
        }
      } catch (const std::logic_error&) {
        throw Exit{kUsage, "--version must be 1-40 or auto, --ec one of L, M, Q, H"};
      }
      config.mask = mask;
      const auto payload = read_bytes(input);
      qrio::write_png(output, qrio::payload_to_qr(payload, config));
      return kSuccess;
    }
    if (*qr_decode) {
      write_bytes(output, qrio::qr_to_payload(qrio::read_png(input)));
      return kSuccess;
    }
    if (*size) {
      out << format_size_report(measure(load_program(input)));
      return kSuccess;
    }
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kQrError;
  } catch (const QrReadError& e) {
    err << "error: " << e.what() << "\n";
    return kQrError;
  } catch (const ImageError& e) {
    err << "error: " << e.what() << "\n";
    return kQrError;
  } catch (const CodecError& e) {
    err << "error: " << e.what() << "\n";
    return kCodecError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kCompileError;
  }
  return kUsage;
}

}  // namespace qrscript::cli
