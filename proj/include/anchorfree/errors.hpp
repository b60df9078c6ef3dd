#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace anchorfree {

using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : IoError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Inputs are well formed but the math cannot proceed (infeasible LP,
// degenerate topics, eigensolver failure, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LpInfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LpUnboundedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenNonConvergence : public NumericalError {
 public:
  EigenNonConvergence(const std::string& what, Eigen::VectorXd partial)
      : NumericalError(what), partial_spectrum(std::move(partial)) {}

  Eigen::VectorXd partial_spectrum;
};

// Non-fatal conditions that callers may want to surface. Passing nullptr
// wherever a Warnings* is accepted discards them.
struct Warnings {
  std::vector<std::string> messages;

  void add(std::string msg) { messages.push_back(std::move(msg)); }
  bool empty() const { return messages.empty(); }
};

inline void warn(Warnings* sink, std::string msg) {
  if (sink) sink->add(std::move(msg));
}

}  // namespace anchorfree
