#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subwordseg {

// Malformed Netpbm payload. offset is the byte position where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Ground-truth document that does not satisfy the sub-word schema.
// subword_index is 1-based; 0 means the error concerns the word element itself.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::size_t subword_index)
      : std::runtime_error(subword_index == 0
                               ? what
                               : "subword " + std::to_string(subword_index) + ": " + what),
        subword_index_(subword_index) {}

  std::size_t subword_index() const noexcept { return subword_index_; }

 private:
  std::size_t subword_index_;
};

// Invalid configuration or generator parameters.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace subwordseg
