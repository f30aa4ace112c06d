#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrscript/ir.hpp"

namespace qrscript {

/// Reference number -> text printed on the sticker.
class ReferenceTable {
 public:
  ReferenceTable() = default;

  /// Returns false if the number is already present.
  bool insert(std::uint64_t number, std::string text);
  const std::string* find(std::uint64_t number) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::uint64_t, std::string>& entries() const noexcept { return entries_; }

  /// One "n=text" pair per line; blank lines and lines starting with '#'
  /// are skipped. Throws SourceError on malformed lines or duplicate keys.
  static ReferenceTable parse(std::string_view text);
  static ReferenceTable load(const std::filesystem::path& path);

  friend bool operator==(const ReferenceTable&, const ReferenceTable&) = default;

 private:
  std::map<std::uint64_t, std::string> entries_;
};

struct SessionEvent {
  enum class Kind { PromptChoice, PromptText, Output, Terminated, Failed };

  Kind kind = Kind::Terminated;
  std::string message;               // PromptChoice, PromptText, Output
  std::vector<std::string> options;  // PromptChoice, without "Other"
  bool other = false;                // PromptChoice: always true
  bool terminal = false;             // Output
  std::string reason;                // Failed

  static SessionEvent prompt_choice(std::string message, std::vector<std::string> options) {
    return {Kind::PromptChoice, std::move(message), std::move(options), true, false, {}};
  }
  static SessionEvent prompt_text(std::string message) { return {Kind::PromptText, std::move(message), {}, false, false, {}}; }
  static SessionEvent output(std::string message, bool terminal) {
    return {Kind::Output, std::move(message), {}, false, terminal, {}};
  }
  static SessionEvent terminated() { return {}; }
  static SessionEvent failed(std::string reason) { return {Kind::Failed, {}, {}, false, false, std::move(reason)}; }

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

std::string_view to_string(SessionEvent::Kind kind);

/// Label of the implicit default answer offered with every choice prompt.
inline constexpr std::string_view kOtherLabel = "Other";

/// One interactive execution of a program.
///
/// The caller alternates strictly: advance() while the state is Running,
/// submit_answer() while it is AwaitingChoice or AwaitingText. Non-terminal
/// output leaves the session Running. Jumps only go forward, so every call
/// executes at most size() instructions before returning.
class Session {
 public:
  enum class State { Running, AwaitingChoice, AwaitingText, Terminated, Failed };

  /// Throws InvalidProgramError if the program does not validate.
  explicit Session(Program program, std::optional<ReferenceTable> refs = std::nullopt);

  SessionEvent advance();
  SessionEvent submit_answer(std::string answer);

  State state() const noexcept { return state_; }
  bool finished() const noexcept { return state_ == State::Terminated || state_ == State::Failed; }
  std::size_t pc() const noexcept { return pc_; }
  const std::optional<std::string>& last_value() const noexcept { return last_value_; }
  const Program& program() const noexcept { return program_; }
  /// Instructions executed so far.
  std::size_t steps() const noexcept { return steps_; }

 private:
  SessionEvent run();
  SessionEvent fail(std::string reason);
  std::optional<std::string> resolve(const Constant& constant, std::string& error) const;
  // Returns nullopt when the comparison cannot be made (conversion error).
  std::optional<bool> compare(RelOp op, const Operand& operand) const;

  Program program_;
  std::optional<ReferenceTable> refs_;
  std::size_t pc_ = 1;
  std::optional<std::string> last_value_;
  State state_ = State::Running;
  std::size_t steps_ = 0;
};

std::string_view to_string(Session::State state);

/// Equivalent to constructing a Session.
inline Session create_session(Program program, std::optional<ReferenceTable> refs = std::nullopt) {
  return Session(std::move(program), std::move(refs));
}

/// Drives a fresh session with scripted answers, collecting every event
/// until the session finishes or the script runs out.
std::vector<SessionEvent> run_script(const Program& program, const std::vector<std::string>& answers,
                                     const std::optional<ReferenceTable>& refs = std::nullopt);

}  // namespace qrscript
