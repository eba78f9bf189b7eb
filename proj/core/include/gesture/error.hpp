#pragma once

#include <stdexcept>
#include <string>

namespace gesture {

enum class ErrorKind {
  Format,     // malformed manifest, CSV or PGM content
  Integrity,  // data violates a structural invariant (sizes, counts)
  Io,         // a file could not be read or written
  Argument,   // a caller passed parameters outside their domain
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ErrorKind::Format, what) {}
};

struct IntegrityError : Error {
  explicit IntegrityError(const std::string& what) : Error(ErrorKind::Integrity, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};

// Process exit code used by the command-line tool for each error kind.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return 2;
    case ErrorKind::Integrity: return 3;
    case ErrorKind::Io: return 4;
    case ErrorKind::Argument: return 1;
  }
  return 1;
}

}  // namespace gesture
