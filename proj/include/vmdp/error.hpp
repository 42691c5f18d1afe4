#pragma once

#include <stdexcept>
#include <string>

namespace vmdp {

/// A model, policy or frequency vector violates a domain invariant.
class ModelError : public std::invalid_argument {
 public:
  explicit ModelError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file (JSON, CSV) or an I/O failure.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal numerical inconsistency: a state the theory rules out was reached.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vmdp
