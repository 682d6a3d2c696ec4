#include "gftlab/cli.hpp"

int main(int argc, char** argv) { return gftlab::cli_main(argc, argv); }
