#pragma once

namespace webrec {

// Command-line front end; returns the process exit status
// (0 success, 1 usage/parameter error, 2 numerical failure).
int run_cli(int argc, const char* const* argv);

}  // namespace webrec
