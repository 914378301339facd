#include "shadowlab/cli.hpp"

int main(int argc, char** argv) { return shadowlab::cli::main(argc, argv); }
