#include "darksim/cli.hpp"

int main(int argc, char** argv) { return darksim::cli_main(argc, argv); }
