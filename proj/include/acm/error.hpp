#ifndef ACM_ERROR_HPP
#define ACM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), message_(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }
  /// Description without the offset suffix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& token, std::size_t offset)
      : ParseError("unknown identifier '" + token + "'", offset), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

/// Evaluation outside the domain of an elementary function (pole, ln x<=0, sqrt x<0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

/// Manifest does not match the schema; `field` names the offending key path.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Two independently computed verdicts that must agree did not.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace acm

#endif  // ACM_ERROR_HPP
