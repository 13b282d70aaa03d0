#pragma once

#include <stdexcept>
#include <string>

namespace hopda {

enum class ErrorKind {
  EmptyPop,
  CollapseUnsupported,
  OrderOutOfRange,
  EmptyLevel,
  Parse,
  Injectivity,
  UnknownName,
  Precondition,
  UnresolvableRef,
  BudgetExceeded,
  RuleMismatch,
  NotComposer,
  Overflow,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hopda
