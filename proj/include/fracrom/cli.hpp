#pragma once

namespace fracrom {

// Entry point for the `fracrom` command-line tool. Parses argv, dispatches to
// the subcommand (offline / online / sweep / fom / bench), and maps errors to
// exit codes: 0 success, 2 usage or config errors, 3 numeric failures,
// 4 I/O failures.
int run_cli(int argc, const char* const* argv);

}  // namespace fracrom
