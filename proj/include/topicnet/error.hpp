#pragma once

#include <stdexcept>
#include <string>

namespace topicnet {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  ok = 0,
  usage = 2,
  data = 3,
  numeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid configuration, arguments or degenerate inputs that make a fit meaningless.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::usage) {}
};

/// Bad input data: unreadable files, malformed lines, non-finite values.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what, ExitCode::data) {}
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical failure or a violated internal invariant.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what, ExitCode::numeric) {}
};

}  // namespace topicnet
