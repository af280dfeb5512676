#pragma once

#include <iosfwd>

namespace monodrift {

/// Entry point of the `monodrift` tool. Exit codes: 0 success, 1 runtime
/// failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monodrift
