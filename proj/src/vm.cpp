#include "qrscript/vm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qrscript/error.hpp"

namespace qrscript {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  return text;
}

std::optional<std::int64_t> to_integer(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> to_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::general);
  // Out-of-range magnitudes still convert to the nearest half, an infinity.
  if (text.empty() || (ec != std::errc{} && ec != std::errc::result_out_of_range) ||
      ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  if (ec == std::errc::result_out_of_range) {
    const bool negative = text.front() == '-';
    const bool tiny = text.find_first_of("eE") != std::string_view::npos &&
                      text[text.find_first_of("eE") + 1] == '-';
    value = tiny ? (negative ? -0.0 : 0.0)
                 : (negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity());
  }
  return value;
}

template <typename T>
bool apply(RelOp op, T lhs, T rhs) {
  switch (op) {
    case RelOp::Eq: return lhs == rhs;
    case RelOp::Ne: return lhs != rhs;
    case RelOp::Le: return lhs <= rhs;
    case RelOp::Ge: return lhs >= rhs;
    case RelOp::Lt: return lhs < rhs;
    case RelOp::Gt: return lhs > rhs;
  }
  return false;
}

}  // namespace

bool ReferenceTable::insert(std::uint64_t number, std::string text) {
  return entries_.emplace(number, std::move(text)).second;
}

const std::string* ReferenceTable::find(std::uint64_t number) const {
  const auto it = entries_.find(number);
  return it == entries_.end() ? nullptr : &it->second;
}

ReferenceTable ReferenceTable::parse(std::string_view text) {
  ReferenceTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw SourceError("expected 'number=text'", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    std::uint64_t number = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), number);
    if (key.empty() || ec != std::errc{} || ptr != key.data() + key.size()) {
      throw SourceError("reference number must be an unsigned decimal", line_no);
    }
    if (!table.insert(number, std::string(line.substr(eq + 1)))) {
      throw SourceError("duplicate reference " + std::to_string(number), line_no);
    }
  }
  return table;
}

ReferenceTable ReferenceTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open reference table " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string_view to_string(SessionEvent::Kind kind) {
  switch (kind) {
    case SessionEvent::Kind::PromptChoice: return "prompt_choice";
    case SessionEvent::Kind::PromptText: return "prompt_text";
    case SessionEvent::Kind::Output: return "output";
    case SessionEvent::Kind::Terminated: return "terminated";
    case SessionEvent::Kind::Failed: return "failed";
  }
  return "?";
}

std::string_view to_string(Session::State state) {
  switch (state) {
    case Session::State::Running: return "running";
    case Session::State::AwaitingChoice: return "awaiting_choice";
    case Session::State::AwaitingText: return "awaiting_text";
    case Session::State::Terminated: return "terminated";
    case Session::State::Failed: return "failed";
  }
  return "?";
}

Session::Session(Program program, std::optional<ReferenceTable> refs)
    : program_(std::move(program)), refs_(std::move(refs)) {
  require_valid(program_);
}

SessionEvent Session::advance() {
  if (state_ != State::Running) throw StateError("cannot advance a session that is " + std::string(to_string(state_)));
  return run();
}

SessionEvent Session::submit_answer(std::string answer) {
  if (state_ != State::AwaitingChoice && state_ != State::AwaitingText) {
    throw StateError("session is " + std::string(to_string(state_)) + ", not awaiting input");
  }
  last_value_ = std::move(answer);
  ++pc_;
  state_ = State::Running;
  return run();
}

SessionEvent Session::fail(std::string reason) {
  state_ = State::Failed;
  return SessionEvent::failed(std::move(reason));
}

std::optional<std::string> Session::resolve(const Constant& constant, std::string& error) const {
  if (const auto* text = std::get_if<std::string>(&constant)) return *text;
  const std::uint64_t number = std::get<Reference>(constant).number;
  if (refs_) {
    if (const std::string* text = refs_->find(number)) return *text;
  }
  error = "unresolved reference " + std::to_string(number);
  return std::nullopt;
}

std::optional<bool> Session::compare(RelOp op, const Operand& operand) const {
  if (!last_value_) return std::nullopt;
  if (const auto* rhs = std::get_if<std::int32_t>(&operand)) {
    if (const auto lhs = to_integer(*last_value_)) return apply<std::int64_t>(op, *lhs, *rhs);
    // A fractional answer is still comparable with an integer operand.
    const auto real = to_real(*last_value_);
    if (!real || std::isnan(*real)) return std::nullopt;
    return apply<double>(op, *real, static_cast<double>(*rhs));
  }
  const auto lhs = to_real(*last_value_);
  if (!lhs) return std::nullopt;
  // Both sides are compared in half precision.
  return apply<double>(op, Half::from_double(*lhs).to_double(), std::get<Half>(operand).to_double());
}

SessionEvent Session::run() {
  std::string error;
  while (pc_ <= program_.size()) {
    const Quadruple& q = program_.at(pc_);
    ++steps_;
    switch (q.opcode) {
      case Opcode::Input:
      case Opcode::Inputs: {
        auto message = resolve(*q.constant, error);
        if (!message) return fail(error);
        if (q.opcode == Opcode::Input && pc_ < program_.size() && program_.at(pc_ + 1).opcode == Opcode::If) {
          std::vector<std::string> options;
          for (std::size_t i = pc_ + 1; i <= program_.size() && program_.at(i).opcode == Opcode::If; ++i) {
            auto option = resolve(*program_.at(i).constant, error);
            if (!option) return fail(error);
            options.push_back(std::move(*option));
          }
          state_ = State::AwaitingChoice;
          return SessionEvent::prompt_choice(std::move(*message), std::move(options));
        }
        state_ = State::AwaitingText;
        return SessionEvent::prompt_text(std::move(*message));
      }
      case Opcode::Print: {
        auto message = resolve(*q.constant, error);
        if (!message) return fail(error);
        ++pc_;
        return SessionEvent::output(std::move(*message), false);
      }
      case Opcode::Printex: {
        auto message = resolve(*q.constant, error);
        if (!message) return fail(error);
        state_ = State::Terminated;
        if (message->empty()) return SessionEvent::terminated();
        return SessionEvent::output(std::move(*message), true);
      }
      case Opcode::Goto: pc_ = *q.target; break;
      case Opcode::If: {
        auto expected = resolve(*q.constant, error);
        if (!expected) return fail(error);
        pc_ = (last_value_ && *last_value_ == *expected) ? *q.target : pc_ + 1;
        break;
      }
      case Opcode::Ifc: {
        const auto taken = compare(*q.rel_op, *q.operand);
        if (!taken) return fail("conversion error");
        pc_ = *taken ? *q.target : pc_ + 1;
        break;
      }
    }
  }
  state_ = State::Terminated;
  return SessionEvent::terminated();
}

std::vector<SessionEvent> run_script(const Program& program, const std::vector<std::string>& answers,
                                     const std::optional<ReferenceTable>& refs) {
  Session session(program, refs);
  std::vector<SessionEvent> events{session.advance()};
  std::size_t next_answer = 0;
  while (!session.finished()) {
    if (session.state() == Session::State::Running) {
      events.push_back(session.advance());
    } else if (next_answer < answers.size()) {
      events.push_back(session.submit_answer(answers[next_answer++]));
    } else {
      break;
    }
  }
  return events;
}

}  // namespace qrscript
