#include "ptyopt/harness.hpp"

int main(int argc, char** argv) { return ptyopt::run_cli(argc, argv); }
