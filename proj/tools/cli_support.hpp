#pragma once

namespace hybridlattice::cli {

// Full command-line application. Returns the process exit code:
// 0 success, 2 configuration or usage error, 3 resonant detuning,
// 4 unstable lattice, 5 validation failure, 1 unexpected error.
int run(int argc, char** argv);

}  // namespace hybridlattice::cli
