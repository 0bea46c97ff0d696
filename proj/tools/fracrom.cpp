#include "fracrom/cli.hpp"

int main(int argc, char** argv) { return fracrom::run_cli(argc, argv); }
