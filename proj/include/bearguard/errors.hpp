#pragma once

#include <stdexcept>
#include <string>

namespace bearguard {

// Input that could not be parsed (bad file, bad CSV row, bad JSON).
// The CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A violated domain invariant (bad bounding box, non-monotonic time,
// empty ground truth, ...). The CLI maps this to exit code 3.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure talking to the underlying stream or filesystem.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bearguard
