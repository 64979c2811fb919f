#pragma once

namespace notelab::cli {

// Entry point for the notelab command-line tool. Returns the process exit
// code: 0 ok, 1 usage error, 2 data error, 3 numeric failure.
int run(int argc, char** argv);

} // namespace notelab::cli
