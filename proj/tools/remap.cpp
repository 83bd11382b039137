#include "remap/cli.hpp"

int main(int argc, char** argv) { return remap::cli::run(argc, argv); }
