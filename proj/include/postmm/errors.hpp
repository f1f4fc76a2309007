#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace postmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag, used in CSV status columns.
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_input"; }
};

/// A requested frequency sits on (or numerically next to) a mode cutoff.
class CutoffSingular : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "cutoff_singular"; }
};

/// Fewer matching equations than unknown modal amplitudes.
class Underdetermined : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "underdetermined"; }
};

class RankDeficient : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "rank_deficient"; }
};

/// The interior feedback operator of a cascade could not be inverted.
class SingularCascade : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular_cascade"; }
};

class NoConvergence : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "no_convergence"; }
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }
  const char* kind() const noexcept override { return "parse_error"; }

 private:
  int line_;
};

/// Carries every violated invariant found while validating a configuration.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }
  const char* kind() const noexcept override { return "validation_error"; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace postmm
