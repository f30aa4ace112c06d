#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrscript {

/// Root of every error thrown by the toolchain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value cannot be represented in the requested bit layout.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// A reader ran out of bits.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Errors carrying a 1-based source position (lexer, parser, TAC reader).
class SourceError : public Error {
 public:
  SourceError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class LexError : public SourceError {
 public:
  using SourceError::SourceError;
};

class SyntaxError : public SourceError {
 public:
  using SourceError::SourceError;
};

/// Malformed three-address-code text.
class TacParseError : public SourceError {
 public:
  using SourceError::SourceError;
};

/// Base of every failure to turn bytes back into a program.
class CodecError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDialectError : public CodecError {
 public:
  explicit UnsupportedDialectError(unsigned long long dialect)
      : CodecError("unsupported dialect " + std::to_string(dialect)), dialect_(dialect) {}

  unsigned long long dialect() const noexcept { return dialect_; }

 private:
  unsigned long long dialect_;
};

class ReservedOpcodeError : public CodecError {
 public:
  using CodecError::CodecError;
};

class ReservedStringTypeError : public CodecError {
 public:
  using CodecError::CodecError;
};

class MalformedPayloadError : public CodecError {
 public:
  explicit MalformedPayloadError(const std::string& what) : CodecError("malformed payload: " + what) {}
};

/// A program that fails validation was handed to an operation requiring a valid one.
class InvalidProgramError : public Error {
 public:
  using Error::Error;
};

/// An operation was attempted on a session in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class QrReadError : public Error {
 public:
  using Error::Error;
};

class ImageError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrscript
