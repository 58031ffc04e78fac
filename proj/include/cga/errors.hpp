#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cga {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

// The normal-form search ran past its growth bound.
class SearchBoundExceeded : public std::runtime_error {
 public:
  SearchBoundExceeded(const std::string& msg, std::size_t bound, std::size_t reached)
      : std::runtime_error(msg), bound_(bound), reached_(reached) {}
  std::size_t bound() const { return bound_; }
  std::size_t reached() const { return reached_; }

 private:
  std::size_t bound_;
  std::size_t reached_;
};

// A structure violated one of its own invariants (not the caller's fault).
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cga
