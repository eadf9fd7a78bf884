#pragma once

#include <stdexcept>
#include <string>

namespace geophylo {

enum class ErrorKind {
  kInvalidInput,   // malformed documents, bad arguments
  kInfeasible,     // constraints admit no realizable order
  kCapExceeded,    // enumeration bound or k_cap exceeded
  kPrecondition,   // operation called on an instance it does not support
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace geophylo
