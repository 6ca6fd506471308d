#pragma once

#include <stdexcept>
#include <string>

namespace smtwt {

// Failure categories map onto the CLI exit codes (1 usage, 2 I/O, 3 invariant).
enum class ErrorKind { usage = 1, io = 2, invariant = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& what) { return {ErrorKind::usage, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::io, what}; }
inline Error invariant_error(const std::string& what) { return {ErrorKind::invariant, what}; }

}  // namespace smtwt
