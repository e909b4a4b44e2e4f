#ifndef CROSSMAP_ERROR_HPP
#define CROSSMAP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crossmap {

// Base class for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace crossmap

#endif  // CROSSMAP_ERROR_HPP
