#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace semkg {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A frame arrived whose index does not follow the previous one.
class StreamGapError : public Error {
 public:
  StreamGapError(std::uint64_t expected, std::uint64_t got)
      : Error("stream gap: expected frame " + std::to_string(expected) + ", got " +
              std::to_string(got)),
        expected_(expected),
        got_(got) {}

  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t got() const noexcept { return got_; }

 private:
  std::uint64_t expected_;
  std::uint64_t got_;
};

/// Failure while reading a line-oriented input file.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, Undeclared, Duplicate };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}

  Kind kind() const noexcept { return kind_; }
  /// 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class CommandError : public Error {
 public:
  enum class Kind { Empty, TooLong, Alternation, UnknownRelation };

  CommandError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A replay track has no annotation (and no default) for part of a clip.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// The external captioner violated the wire protocol.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what, std::optional<std::size_t> frame = {})
      : Error(what), frame_(frame) {}

  /// Offset within the clip of the frame whose attention row was rejected.
  std::optional<std::size_t> frame() const noexcept { return frame_; }

 private:
  std::optional<std::size_t> frame_;
};

class CaptionLengthError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

/// Raised by the pipeline when a clip fails under the `halt` policy.
class PipelineHalt : public Error {
 public:
  using Error::Error;
};

}  // namespace semkg
