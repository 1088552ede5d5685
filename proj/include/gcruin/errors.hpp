#pragma once

#include <stdexcept>
#include <string>

namespace gcruin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid law or algebra parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested analytic route does not apply to the given model.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Divergence, failed root bracketing or other numerical breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Net profit condition violated: survival is zero for every capital.
class CertainRuinError : public NumericError {
 public:
  explicit CertainRuinError(double rho)
      : NumericError("certain ruin: rho = " + std::to_string(rho) + " >= 1"), rho_(rho) {}
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

/// Malformed configuration; `path` names the offending JSON field.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gcruin
