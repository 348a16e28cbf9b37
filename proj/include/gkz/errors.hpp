#pragma once

#include <stdexcept>
#include <string>

namespace gkz {

// Process exit codes used by the command line tool.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  parse = 2,
  parameter = 3,
  resource = 4,
  not_a_basis = 5,
  normalization = 6,
  degenerate = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ExitCode::parse, w) {}
};

// Non-generic parameters, invalid matrices, integer exponents where the theory needs generic ones.
struct ParameterError : Error {
  explicit ParameterError(const std::string& w) : Error(ExitCode::parameter, w) {}
};

// Exponents outside the integrability range of an integral.
struct DivergenceError : ParameterError {
  explicit DivergenceError(const std::string& w) : ParameterError(w) {}
};

// Step limits, exponent overflow, anything that ran out of budget.
struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ExitCode::resource, w) {}
};

struct NotABasisError : Error {
  explicit NotABasisError(const std::string& w) : Error(ExitCode::not_a_basis, w) {}
};

struct NormalizationError : Error {
  explicit NormalizationError(const std::string& w) : Error(ExitCode::normalization, w) {}
};

// Non-generic weights, b-function or decomposition failures.
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(ExitCode::degenerate, w) {}
};

}  // namespace gkz
