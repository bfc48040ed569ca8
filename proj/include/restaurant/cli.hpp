// SPDX-License-Identifier: Apache-2.0
//
// The restaurant-game command line. Kept as a library function so the
// tests can drive it without spawning processes.
#pragma once

#include <iosfwd>

namespace restaurant::cli {

/// Exit codes: 0 success, 2 invalid input, 3 convergence or feasibility failure.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kSolverFailure = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace restaurant::cli
