#include "frontlab/cli.hpp"

int main(int argc, char** argv) { return frontlab::cli_main(argc, argv); }
