#include "divmom/cli.hpp"

int main(int argc, char** argv) { return divmom::cli::run_cli(argc, argv); }
