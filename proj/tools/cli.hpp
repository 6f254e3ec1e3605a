#pragma once

namespace hyperpi::cli {

/// Entry point of the hyperpi command-line tool. Returns the process exit
/// code: 0 on success, 1 for runtime failures, 2 for usage errors and
/// malformed plans.
int run(int argc, const char* const* argv);

}  // namespace hyperpi::cli
