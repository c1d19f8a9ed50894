#include "ouexit/cli.hpp"

int main(int argc, char** argv) { return ouexit::run_cli(argc, argv); }
