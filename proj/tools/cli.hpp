#pragma once

#include <ostream>

namespace perfwall::cli {

// Exit status: 0 success, 1 input/validation error, 2 internal invariant violation.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace perfwall::cli
