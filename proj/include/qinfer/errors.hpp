#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qinfer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An operator expected to be positive semidefinite has a negative eigenvalue
/// below the clamp tolerance.
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Projective evidence whose outcome probability is at or below the
/// impossibility threshold.
class ImpossibleEvidence : public Error {
 public:
  ImpossibleEvidence(const std::string& what, double probability, std::string label = {})
      : Error(what), probability_(probability), label_(std::move(label)) {}
  double probability() const noexcept { return probability_; }
  /// Node id (network queries) or empty for raw subsystem evidence.
  const std::string& label() const noexcept { return label_; }

 private:
  double probability_;
  std::string label_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "network validation failed";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qinfer
