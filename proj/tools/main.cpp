#include "kddfs/cli.hpp"

int main(int argc, char** argv) { return kddfs::run_cli(argc, argv); }
