#include "cli_support.hpp"

int main(int argc, char** argv) { return hybridlattice::cli::run(argc, argv); }
