// SPDX-License-Identifier: Apache-2.0
#include "restaurant/error.hpp"

namespace restaurant {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidGame: return "InvalidGame";
    case ErrorKind::NotOnCurve: return "NotOnCurve";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotWinnable: return "NotWinnable";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::InvalidPovm: return "InvalidPovm";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::NoAdvantage: return "NoAdvantage";
    case ErrorKind::EmptyRow: return "EmptyRow";
    case ErrorKind::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

}  // namespace restaurant
