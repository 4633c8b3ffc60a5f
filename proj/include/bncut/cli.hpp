#pragma once

#include <iosfwd>

namespace bncut {

/// Entry point for the bncut tool. Returns the process exit code:
/// 0 success, 1 usage error, 2 invalid input, 3 inference error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace bncut
