#pragma once

#include <stdexcept>
#include <string>

namespace contactsym {

/// Mismatched variable tables, unknown variables, malformed shapes.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Inputs outside the mathematical domain of an operation (critical weights,
/// fiber variables where only base variables are allowed, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed textual input (rationals, JSON documents, CLI values).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A weight lies in the critical set C_k; `index` is the offending p in
/// -p/(2(n+1)).
class CriticalWeightError : public DomainError {
 public:
  CriticalWeightError(const std::string& what, int index)
      : DomainError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

}  // namespace contactsym
