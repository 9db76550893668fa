// Exception types raised by the tokenfcm library.
#ifndef TOKENFCM_ERROR_HPP_
#define TOKENFCM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace tokenfcm {

/// Base class for every recoverable error reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expert tally with no experts or the wrong number of grades.
class InvalidTallyError : public Error {
 public:
  using Error::Error;
};

/// Linguistic index or unit value outside the scale.
class OutOfScaleError : public Error {
 public:
  using Error::Error;
};

/// Risk-index weights that are not strictly positive or do not sum to 1.
class InvalidWeightsError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector lengths or empty argument lists.
class ArityError : public Error {
 public:
  using Error::Error;
};

class MissingNodeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input to a threshold function.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid analysis or simulation settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model rejected by validation; carries every violation found.
class InvalidModelError : public Error {
 public:
  explicit InvalidModelError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// The trace did not reach a fixed point or a limit cycle.
class NotConvergedError : public Error {
 public:
  using Error::Error;
};

/// A single diagnostic from the model-file parser.
struct ParseIssue {
  int line = 0;  ///< 1-based; 0 when no position is known.
  std::string message;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::vector<ParseIssue> issues);

  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  std::vector<ParseIssue> issues_;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tokenfcm

#endif  // TOKENFCM_ERROR_HPP_
