#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qrscript/vm.hpp"

namespace qrscript::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kCompileError = 2,
  kCodecError = 3,
  kRuntimeFailure = 4,
  kQrError = 5,
};

/// Entry point of the `qrscript` tool with injectable streams.
int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

/// Plays a session on a terminal: prompts go to `out`, answers come from `in`.
/// Choice prompts accept an option number or free text.
int interact(Session& session, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qrscript::cli
