#pragma once

namespace payda {

// Full command-line front end; returns the process exit code.
// 0 = success, 1 = I/O failure, 2 = invalid flags or configuration.
int cli_main(int argc, const char* const* argv);

}  // namespace payda
