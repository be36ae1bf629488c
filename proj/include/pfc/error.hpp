#pragma once

#include <stdexcept>
#include <string>

namespace pfc {

enum class ErrorKind {
  Syntax,
  Validation,
  Io,
  UniverseTooLarge,
  InconsistentState,
  InconsistentSuccessor,
  NoApplicableAction,
  IterationCap,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Error(ErrorKind kind, const std::string& what, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        kind_(kind), line_(line), col_(col) {}

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  ErrorKind kind_;
  int line_ = 0;
  int col_ = 0;
};

}  // namespace pfc
