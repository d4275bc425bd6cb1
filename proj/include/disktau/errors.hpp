#pragma once

#include <stdexcept>
#include <string>

namespace disktau {

// Two operands were built with different truncation caps.
class CapMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A descendent index or degree exceeds the caps of a series.
class CapError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is outside the domain where a formula holds.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested vertex, label or edge does not belong to the graph.
class NotInGraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A graph fails the stable-graph conditions.
class InvalidGraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace disktau
