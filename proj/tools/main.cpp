#include "notelab/cli.hpp"

int main(int argc, char** argv) { return notelab::cli::run(argc, argv); }
