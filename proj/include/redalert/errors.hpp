#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace redalert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A construct outside the analysed subset (negation, if-then-else, assert, ...).
class UnsupportedError : public Error {
 public:
  UnsupportedError(std::string construct, const std::string& where)
      : Error("unsupported construct '" + construct + "'" + (where.empty() ? "" : " in " + where)),
        construct_(std::move(construct)) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class AnalysisError : public Error {
 public:
  AnalysisError(std::string phase, const std::string& msg) : Error(phase + ": " + msg), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

class NonStratifiedError : public AnalysisError {
 public:
  explicit NonStratifiedError(std::vector<std::string> cycle);
  /// Predicate names along the cycle, first element repeated at the end.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

}  // namespace redalert
