#pragma once

#include <stdexcept>
#include <string>

namespace nilgraph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition (bad point, wrong model, wrong sheet, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Only Nil3 (0, 1/2) and H2xR (-1, 0) carry metric operations.
class UnsupportedSpace : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// Newton/linear iteration ran out of budget; carries the last residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// The N formula denominator tau0^2 - 16|Q|^2 vanishes (geodesic Gauss map).
class DegenerateCase : public Error {
 public:
  using Error::Error;
};

/// Vertical projection folds over itself: no graph resampling possible.
class FoldError : public Error {
 public:
  using Error::Error;
};

class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column = 0)
      : Error(format(what, line, column)), message_(what), line_(line), column_(column) {}
  int line() const { return line_; }
  const std::string& message() const { return message_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }
  std::string message_;
  int line_;
  int column_;
};

}  // namespace nilgraph
