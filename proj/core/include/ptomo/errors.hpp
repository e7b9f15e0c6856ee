#pragma once

#include <stdexcept>
#include <string>

namespace ptomo {

enum class ErrorKind {
  kInvalidState,
  kDimension,
  kUnsupportedDimension,
  kInvalidMeasurement,
  kInvalidChannel,
  kIndexOutOfRange,
  kInvalidArgument,
  kSingularConfiguration,
  kDegenerateIterate,
  kNonConvergence,
  kInfeasible,
  kPartialResult,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind decides
/// the CLI exit status: solver failures map to 3, everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of an iterative procedure (non-convergence,
  /// infeasibility, partial direction search) as opposed to bad input.
  bool is_solver_failure() const noexcept {
    return kind_ == ErrorKind::kNonConvergence ||
           kind_ == ErrorKind::kInfeasible ||
           kind_ == ErrorKind::kPartialResult;
  }

 private:
  ErrorKind kind_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, int iterations,
                      double psd_residual, double tp_residual,
                      double objective_residual = 0.0)
      : Error(ErrorKind::kNonConvergence, what),
        iterations_(iterations),
        psd_residual_(psd_residual),
        tp_residual_(tp_residual),
        objective_residual_(objective_residual) {}

  int iterations() const noexcept { return iterations_; }
  double psd_residual() const noexcept { return psd_residual_; }
  double tp_residual() const noexcept { return tp_residual_; }
  double objective_residual() const noexcept { return objective_residual_; }

 private:
  int iterations_;
  double psd_residual_;
  double tp_residual_;
  double objective_residual_;
};

}  // namespace ptomo
