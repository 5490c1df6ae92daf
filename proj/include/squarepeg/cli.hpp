#pragma once

// The `squares` command line: find, parity, trace, deform, oracle, check, gen.
// Exit codes: 0 success, 1 bad input, 2 non-generic or failed precondition,
// 3 internal contract breach.

#include <iosfwd>

namespace squarepeg {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace squarepeg
