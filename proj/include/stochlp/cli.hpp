#pragma once

#include <iosfwd>

namespace stochlp::cli {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kNonconverged = 1,
  kInputError = 2,
  kNumericalFailure = 3,
};

/// Entry point shared by the `stochlp` binary and the tests.
///
///   solve <file> [--delta D] [--mode paper|practical] [--seed N] [--a A]
///                [--omega W] [--trace out.csv] [--max-iters N] [--json]
///   oracle <file>
///   bench drift [--n N] [--steps T] [--eps-mp E] [--d D] [--seed N]
///               [--model uniform|random]
///   generate --d D --n N [--seed N] [-o file]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stochlp::cli
