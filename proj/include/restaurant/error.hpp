// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace restaurant {

enum class ErrorKind {
  InvalidInput,
  InvalidGame,
  NotOnCurve,
  DegenerateGeometry,
  ConvergenceFailure,
  NotWinnable,
  Infeasible,
  Unbounded,
  InvalidPovm,
  DegenerateSplit,
  NoAdvantage,
  EmptyRow,
  NotApplicable,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. Every failure carries a machine-readable kind so
/// the CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace restaurant
