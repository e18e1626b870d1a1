#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrdcp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument's domain was violated (H outside (0,1), n < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (embedding not PSD, root not bracketed, degenerate input).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);

}  // namespace lrdcp
