#include "cli.hpp"

int main(int argc, char** argv) { return fht::run_cli(argc, argv); }
