#pragma once

#include <stdexcept>
#include <string>

namespace kinoplan {

/// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- geometry ---
class ZeroVectorError : public Error {
public:
  using Error::Error;
};
class OutOfLimitsError : public Error {
public:
  using Error::Error;
};
class DegenerateRadiusError : public Error {
public:
  using Error::Error;
};
class FixedJointError : public Error {
public:
  using Error::Error;
};
class InvariantViolationError : public Error {
public:
  using Error::Error;
};

// --- parsing ---
class ParseError : public Error {
public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_ = 0;
};

class SchemaError : public Error {
public:
  using Error::Error;
};

class GrammarError : public Error {
public:
  GrammarError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_ = 0;
};

class SequenceError : public Error {
public:
  using Error::Error;
};

// --- planning ---
class BadStepError : public Error {
public:
  using Error::Error;
};
class InfeasibleTaskError : public Error {
public:
  using Error::Error;
};

// --- prompting ---
class PromptError : public Error {
public:
  using Error::Error;
};
class AlignmentError : public Error {
public:
  using Error::Error;
};
class EmptyPlanError : public Error {
public:
  using Error::Error;
};
class NoActionsFoundError : public Error {
public:
  using Error::Error;
};
class PipelineError : public Error {
public:
  using Error::Error;
};
class ClientError : public Error {
public:
  using Error::Error;
};

// --- harness ---
class IoError : public Error {
public:
  using Error::Error;
};
class UnknownCategoryError : public Error {
public:
  using Error::Error;
};
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace kinoplan
