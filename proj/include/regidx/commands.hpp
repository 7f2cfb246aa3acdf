#pragma once

namespace regidx {

// Entry point for the regidx CLI. Returns the process exit code:
// 0 success, 1 data/numeric error, 2 usage error.
int run_command(int argc, const char* const* argv);

} // namespace regidx
